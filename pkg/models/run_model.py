from __future__ import annotations
import enum
from datetime import datetime, timezone
from typing import Optional, TYPE_CHECKING
from sqlalchemy import DateTime, Enum, Integer, String, Text
from sqlalchemy.orm import Mapped, mapped_column, relationship
if TYPE_CHECKING:
    from models.census_model import CensusCount
from .base import Base


class RunStatus(enum.Enum):
    SUCCESS    = "success"
    INFEASIBLE = "infeasible"
    FAILED     = "failed"


class RunRecord(Base):
    __tablename__ = "runs"

    id:            Mapped[int]            = mapped_column(Integer, primary_key=True)
    command:       Mapped[str]            = mapped_column(String, nullable=False)
    inputs_digest: Mapped[str]            = mapped_column(String(64), nullable=False, index=True)
    numeric_mode:  Mapped[str]            = mapped_column(String(10), default="rational")
    status:        Mapped[RunStatus]      = mapped_column(Enum(RunStatus, native_enum=False),
                                                          default=RunStatus.SUCCESS)
    exit_code:     Mapped[int]            = mapped_column(Integer, default=0)
    results_json:  Mapped[str]            = mapped_column(Text, nullable=False)
    timings_json:  Mapped[Optional[str]]  = mapped_column(Text, nullable=True)
    created_at:    Mapped[datetime]       = mapped_column(
        DateTime(timezone=True),
        default=lambda: datetime.now(timezone.utc)
    )

    census_counts: Mapped[list["CensusCount"]] = relationship(back_populates="run", cascade="all, delete-orphan")
