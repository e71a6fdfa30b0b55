from sqlalchemy import Column, Integer, String, Float, ForeignKey, DateTime, BigInteger, Index
from sqlalchemy.orm import relationship
from datetime import datetime, timezone
from .database import Base


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class BenchRunRow(Base):
    """One bench invocation over a grid"""
    __tablename__ = "bench_runs"

    id = Column(Integer, primary_key=True, index=True)
    created_at = Column(DateTime, default=_utcnow)
    n = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False)
    count_per_cell = Column(Integer, nullable=False)
    # 64-bit unsigned seeds are stored as text; SQLite integers are signed
    master_seed = Column(String(20), nullable=False)
    budget = Column(BigInteger, nullable=False)

    # Relationships
    instances = relationship("InstanceRow", back_populates="run", cascade="all, delete-orphan")


class InstanceRow(Base):
    """Audit record of one generated and solved instance"""
    __tablename__ = "instances"

    id = Column(Integer, primary_key=True, index=True)
    run_id = Column(Integer, ForeignKey("bench_runs.id", ondelete="CASCADE"), nullable=False)
    p = Column(Float, nullable=False)
    r = Column(Float, nullable=False)
    p_index = Column(Integer, nullable=False)
    r_index = Column(Integer, nullable=False)
    instance_index = Column(Integer, nullable=False)
    seed = Column(String(20), nullable=False)
    verdict = Column(String(16), nullable=False)
    n_u = Column(BigInteger, nullable=True)
    n_a = Column(BigInteger, nullable=True)
    trail_u = Column(Integer, nullable=True)
    trail_a = Column(Integer, nullable=True)
    remainder_pct = Column(Float, nullable=True)
    conflicts = Column(BigInteger, nullable=False)
    assignments = Column(BigInteger, nullable=False)

    # Relationships
    run = relationship("BenchRunRow", back_populates="instances")

    __table_args__ = (
        Index('idx_run_cell', 'run_id', 'p_index', 'r_index'),
    )
