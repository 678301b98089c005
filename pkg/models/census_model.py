from __future__ import annotations
from typing import TYPE_CHECKING
from sqlalchemy import ForeignKey, Integer, String
from sqlalchemy.orm import Mapped, mapped_column, relationship
if TYPE_CHECKING:
    from models.run_model import RunRecord

from .base import Base


class CensusCount(Base):
    __tablename__ = "census_counts"

    id:           Mapped[int] = mapped_column(Integer, primary_key=True)
    run_id:       Mapped[int] = mapped_column(ForeignKey("runs.id"), nullable=False)
    scenario_key: Mapped[str] = mapped_column(String, nullable=False)
    class_key:    Mapped[int] = mapped_column(Integer, nullable=False)
    class_label:  Mapped[str] = mapped_column(String, nullable=False)
    edges:        Mapped[str] = mapped_column(String, default="")
    total:        Mapped[int] = mapped_column(Integer, default=0)
    causal:       Mapped[int] = mapped_column(Integer, default=0)
    noncausal:    Mapped[int] = mapped_column(Integer, default=0)

    run: Mapped["RunRecord"] = relationship(back_populates="census_counts")
