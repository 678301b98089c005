# controllers/db.py
import logging
import os
from typing import Optional

from sqlalchemy import create_engine
from sqlalchemy.orm import sessionmaker, Session as SQLAlchemySession

import config
from models import Base

logger = logging.getLogger(__name__)

# Variables globales para reutilizar engine y Session
_engine = None
_Session: Optional[sessionmaker] = None


def initialize_database() -> bool:
    """
    Inicializa el almacén de resultados solo una vez por proceso.
    La URL se lee de config en el momento de la llamada (los tests la cambian).
    """
    global _engine, _Session

    if _engine is not None:
        return True
    try:
        url = config.DATABASE_URL
        logger.info(f"🔗 Connecting to results store: {url[:50]}")
        if url.startswith("sqlite:///"):
            os.makedirs(os.path.dirname(os.path.abspath(url.replace("sqlite:///", "", 1))), exist_ok=True)
        _engine = create_engine(url, pool_pre_ping=True)
        Base.metadata.create_all(_engine)
        _Session = sessionmaker(bind=_engine)
        logger.info("✅ Results store initialized")
        return True
    except Exception as e:
        logger.error(f"❌ Error initializing results store: {e}")
        _engine = None
        _Session = None
        return False


def get_db_session() -> SQLAlchemySession:
    """
    Devuelve una sesión SQLAlchemy lista para usar.

    Raises:
        RuntimeError: Si no se puede inicializar la base de datos
    """
    if _Session is None and not initialize_database():
        raise RuntimeError(
            "Could not initialize the results store. Check DATABASE_URL / DATABASE_PATH and file permissions."
        )
    if _Session is None:
        raise RuntimeError("Results store session factory is still missing after initialization")
    return _Session()


def close_all_connections():
    """Cierra todas las conexiones y limpia los recursos globales."""
    global _engine, _Session

    if _engine is not None:
        _engine.dispose()
        _engine = None
    _Session = None
    logger.debug("🔒 Results store connections closed")


def get_database_info() -> dict:
    url = config.DATABASE_URL
    info = {
        "database_url": url[:50] + "..." if len(url) > 50 else url,
        "is_initialized": _Session is not None,
        "engine_active": _engine is not None,
    }
    if url.startswith("sqlite:///"):
        path = url.replace("sqlite:///", "", 1)
        info["database_path"] = path
        info["exists"] = os.path.exists(path)
        info["size_bytes"] = os.path.getsize(path) if os.path.exists(path) else 0
    return info
