# models/__init__.py

from .run_model import RunRecord, RunStatus
from .census_model import CensusCount
from .base import Base
