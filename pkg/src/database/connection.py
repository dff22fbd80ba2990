from contextlib import contextmanager
from typing import Iterator, Optional

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.orm import Session, declarative_base, sessionmaker

from core.config import get_settings

Base = declarative_base()

_engines: dict = {}


def get_engine(database_url: Optional[str] = None) -> Engine:
    """Engine for the verification ledger, one per URL"""
    url = database_url or get_settings().database_url
    if url not in _engines:
        _engines[url] = create_engine(
            url,
            connect_args={"check_same_thread": False} if url.startswith("sqlite") else {},
        )
    return _engines[url]


def init_db(database_url: Optional[str] = None) -> Engine:
    """Create ledger tables if they do not exist"""
    # Registers the tables on Base.metadata
    import models.verification  # noqa: F401

    engine = get_engine(database_url)
    Base.metadata.create_all(bind=engine)
    return engine


@contextmanager
def get_db(database_url: Optional[str] = None) -> Iterator[Session]:
    """Session bound to the ledger; rolled back on error, always closed"""
    engine = init_db(database_url)
    session = sessionmaker(autocommit=False, autoflush=False, bind=engine)()
    try:
        yield session
        session.commit()
    except Exception:
        session.rollback()
        raise
    finally:
        session.close()
