# config.py
"""
Configuración unificada del toolkit de antinomia causal.
Todas las variables se leen del entorno (o de un fichero .env).
"""
import os
import logging
from pathlib import Path
from dotenv import load_dotenv

logger = logging.getLogger(__name__)
load_dotenv()

# =============================================================================
# RUTAS
# =============================================================================

BASE_DIR = Path(__file__).parent
DATA_DIR = os.getenv("ANTINOMY_DATA_DIR", os.path.join(BASE_DIR, "data"))
CACHE_DIR = os.getenv("ANTINOMY_CACHE_DIR", os.path.join(DATA_DIR, "cache"))

# =============================================================================
# CONFIGURACIÓN DE BASE DE DATOS (almacén de resultados)
# =============================================================================

def get_database_url() -> str:
    """Obtiene URL de base de datos: DATABASE_URL o SQLite local."""
    url = os.getenv("DATABASE_URL", "")
    if url:
        return url
    db_path = os.getenv("DATABASE_PATH", os.path.join(DATA_DIR, "antinomy_runs.db"))
    return f"sqlite:///{db_path}"

DATABASE_URL = get_database_url()
DATABASE_PATH = DATABASE_URL.replace("sqlite:///", "", 1) if DATABASE_URL.startswith("sqlite:///") else None

# =============================================================================
# LOGGING
# =============================================================================

DEBUG = os.getenv("DEBUG", "False") == "True"
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

# =============================================================================
# LÍMITES Y TOLERANCIAS
# =============================================================================

ENUMERATION_CAP = int(os.getenv("ENUMERATION_CAP", str(2 ** 25)))
INTERVENTION_CAP = int(os.getenv("INTERVENTION_CAP", str(2 ** 20)))
QUANTUM_DIM_CAP = int(os.getenv("QUANTUM_DIM_CAP", "64"))
MAX_CYCLE_NODES = 12
MAX_CANONICAL_NODES = 8

NUMERIC_EPSILON = float(os.getenv("NUMERIC_EPSILON", "1e-9"))
ROBUSTNESS_TOLERANCE = float(os.getenv("ROBUSTNESS_TOLERANCE", "1e-6"))

# =============================================================================
# PARALELISMO
# =============================================================================

DEFAULT_JOBS = int(os.getenv("ANTINOMY_JOBS", str(os.cpu_count() or 1)))
CHUNK_SIZE = int(os.getenv("CHUNK_SIZE", str(2 ** 18)))

APP_NAME = "Causal Antinomy Toolkit"


def log_config_info():
    """Muestra información de configuración al inicio."""
    logger.info("=" * 60)
    logger.info(f"🚀 {APP_NAME}")
    logger.info(f"💾 Database: {DATABASE_URL[:50]}")
    logger.info(f"🗂️ Cache dir: {CACHE_DIR}")
    logger.info(f"🔢 Caps: enumeration={ENUMERATION_CAP}, interventions={INTERVENTION_CAP}, dim={QUANTUM_DIM_CAP}")
    logger.info(f"📏 Epsilon: {NUMERIC_EPSILON}")
    logger.info(f"⚙️ Jobs: {DEFAULT_JOBS} (chunk={CHUNK_SIZE})")
    logger.info(f"🔐 Debug: {DEBUG}")
    logger.info("=" * 60)
