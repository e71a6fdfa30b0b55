from ustsat import models
from ustsat.bench import run_grid
from ustsat.database import open_store, session_scope, sqlite_url
from ustsat.schemas import GridSpec, InstanceRecord, Verdict
from ustsat.store import load_records, record_run


def test_round_trip_keeps_64_bit_seeds(tmp_path):
    factory = open_store(sqlite_url(tmp_path / "logs" / "bench.db"))
    spec = GridSpec(n=20, count_per_cell=2, p_list=[0.1], r_lists=[[2.0]], master_seed=2**64 - 1)
    records = [
        InstanceRecord(p=0.1, r=2.0, p_index=0, r_index=0, instance_index=0, seed=2**64 - 2,
                       verdict=Verdict.SAT, n_u=3, n_a=9, trail_u=2, trail_a=7, remainder_pct=42.5, conflicts=1,
                       assignments=9),
        InstanceRecord(p=0.1, r=2.0, p_index=0, r_index=0, instance_index=1, seed=17,
                       verdict=Verdict.INDETERMINATE, conflicts=50, assignments=100),
    ]

    run_id = record_run(factory, spec, records)

    assert load_records(factory, run_id) == records
    with session_scope(factory) as db:
        run = db.get(models.BenchRunRow, run_id)
        assert int(run.master_seed) == 2**64 - 1
        assert len(run.instances) == 2


def test_runs_are_kept_apart(tmp_path):
    factory = open_store(sqlite_url(tmp_path / "bench.db"))
    spec = GridSpec(n=20, count_per_cell=3, p_list=[0.2], r_lists=[[2.0, 3.0]], master_seed=1)
    _, records = run_grid(spec)

    first = record_run(factory, spec, records)
    second = record_run(factory, spec, records[:2])

    assert first != second
    assert load_records(factory, first) == records
    assert len(load_records(factory, second)) == 2
    assert load_records(factory, 999) == []
