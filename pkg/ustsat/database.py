from contextlib import contextmanager
from pathlib import Path
from typing import Iterator

from sqlalchemy import create_engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

# Create base class for models
Base = declarative_base()


def sqlite_url(path) -> str:
    """SQLAlchemy URL for a local SQLite file, creating its directory"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return f"sqlite:///{path}"


def open_store(url: str) -> sessionmaker:
    """Create the engine, initialize tables and return a session factory"""
    from . import models  # noqa: F401  registers the tables on Base

    engine = create_engine(
        url,
        connect_args={"check_same_thread": False} if "sqlite" in url else {}
    )
    Base.metadata.create_all(bind=engine)
    return sessionmaker(autocommit=False, autoflush=False, bind=engine)


@contextmanager
def session_scope(factory: sessionmaker) -> Iterator[Session]:
    """Session committed on success, rolled back on error"""
    db = factory()
    try:
        yield db
        db.commit()
    except Exception:
        db.rollback()
        raise
    finally:
        db.close()
