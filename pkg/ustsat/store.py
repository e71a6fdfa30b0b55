"""Per-instance bench audit log kept in a SQL database"""
import logging
from typing import List, Sequence

from sqlalchemy.orm import sessionmaker

from . import models
from .database import session_scope
from .schemas import GridSpec, InstanceRecord, Verdict

log = logging.getLogger(__name__)


def record_run(factory: sessionmaker, spec: GridSpec, records: Sequence[InstanceRecord]) -> int:
    """Store one run and its instance records in a single transaction"""
    with session_scope(factory) as db:
        run = models.BenchRunRow(
            n=spec.n,
            k=spec.k,
            count_per_cell=spec.count_per_cell,
            master_seed=str(spec.master_seed),
            budget=spec.budget,
        )
        db.add(run)
        db.flush()
        db.add_all(
            models.InstanceRow(
                run_id=run.id,
                p=record.p,
                r=record.r,
                p_index=record.p_index,
                r_index=record.r_index,
                instance_index=record.instance_index,
                seed=str(record.seed),
                verdict=record.verdict.value,
                n_u=record.n_u,
                n_a=record.n_a,
                trail_u=record.trail_u,
                trail_a=record.trail_a,
                remainder_pct=record.remainder_pct,
                conflicts=record.conflicts,
                assignments=record.assignments,
            )
            for record in records
        )
        run_id = run.id
    log.info("stored run %d with %d instance records", run_id, len(records))
    return run_id


def load_records(factory: sessionmaker, run_id: int) -> List[InstanceRecord]:
    with session_scope(factory) as db:
        rows = (
            db.query(models.InstanceRow)
            .filter(models.InstanceRow.run_id == run_id)
            .order_by(models.InstanceRow.id)
            .all()
        )
        return [
            InstanceRecord(
                p=row.p,
                r=row.r,
                p_index=row.p_index,
                r_index=row.r_index,
                instance_index=row.instance_index,
                seed=int(row.seed),
                verdict=Verdict(row.verdict),
                n_u=row.n_u,
                n_a=row.n_a,
                trail_u=row.trail_u,
                trail_a=row.trail_a,
                remainder_pct=row.remainder_pct,
                conflicts=row.conflicts,
                assignments=row.assignments,
            )
            for row in rows
        ]
