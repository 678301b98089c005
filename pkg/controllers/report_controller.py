# controllers/report_controller.py
"""
Controlador del almacén de resultados: guarda cada ejecución de la CLI y sus
filas de censo, y lista ejecuciones anteriores.
"""
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import pandas as pd

from common.utils import digest_payload
from controllers.db import get_db_session
from models import CensusCount, RunRecord, RunStatus

logger = logging.getLogger(__name__)


@dataclass
class RunReport:
    """Informe de una ejecución: comando, digest de entradas, resultados y tiempos."""
    command: str
    inputs: Dict[str, Any]
    results: Dict[str, Any] = field(default_factory=dict)
    timings: Dict[str, float] = field(default_factory=dict)
    numeric_mode: str = "rational"
    status: RunStatus = RunStatus.SUCCESS
    exit_code: int = 0

    @property
    def inputs_digest(self) -> str:
        return digest_payload({"command": self.command, "inputs": self.inputs})

    def to_json(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "inputs_digest": self.inputs_digest,
            "numeric_mode": self.numeric_mode,
            "status": self.status.value,
            "exit_code": self.exit_code,
            "results": self.results,
            "timings": self.timings,
        }


class ReportController:
    """
    Controlador para persistir informes de ejecución.
    Se usa como context manager para abrir y cerrar la sesión de BD.
    """

    def __init__(self):
        self.db = None

    def __enter__(self):
        self.db = get_db_session()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.db:
            if exc_type is not None:
                self.db.rollback()
            self.db.close()

    def _require_db(self):
        if not self.db:
            raise RuntimeError("ReportController must be used as a context manager")

    def save_run(self, report: RunReport, census_rows: Optional[List[Dict[str, Any]]] = None,
                 scenario_key: str = "") -> int:
        """
        Guarda el informe y, si se da, el censo por clase.

        Returns:
            int: id del RunRecord creado
        """
        self._require_db()
        record = RunRecord(
            command=report.command,
            inputs_digest=report.inputs_digest,
            numeric_mode=report.numeric_mode,
            status=report.status,
            exit_code=report.exit_code,
            results_json=json.dumps(report.results, sort_keys=True, default=str),
            timings_json=json.dumps(report.timings, sort_keys=True),
        )
        for row in census_rows or []:
            record.census_counts.append(CensusCount(
                scenario_key=scenario_key,
                class_key=int(row["class_key"]),
                class_label=row["label"],
                edges=" ".join(f"{k}->{l}" for k, l in row["edges"]),
                total=int(row["total"]),
                causal=int(row["causal"]),
                noncausal=int(row["noncausal"]),
            ))
        self.db.add(record)
        self.db.commit()
        logger.info(f"💾 Stored run #{record.id} ({report.command}, {report.status.value})")
        return record.id

    def get_run(self, run_id: int) -> Optional[RunRecord]:
        self._require_db()
        return self.db.query(RunRecord).filter(RunRecord.id == run_id).first()

    def get_run_results(self, run_id: int) -> Optional[Dict[str, Any]]:
        record = self.get_run(run_id)
        return json.loads(record.results_json) if record else None

    def find_by_digest(self, digest: str) -> List[RunRecord]:
        self._require_db()
        return self.db.query(RunRecord).filter(RunRecord.inputs_digest == digest).order_by(RunRecord.id).all()

    def census_counts(self, run_id: int) -> pd.DataFrame:
        self._require_db()
        rows = self.db.query(CensusCount).filter(CensusCount.run_id == run_id).order_by(CensusCount.class_key).all()
        return pd.DataFrame(
            [{"class_key": r.class_key, "label": r.class_label, "edges": r.edges,
              "total": r.total, "causal": r.causal, "noncausal": r.noncausal} for r in rows],
            columns=["class_key", "label", "edges", "total", "causal", "noncausal"],
        )

    def list_runs(self, limit: int = 20, command: Optional[str] = None) -> pd.DataFrame:
        """Últimas ejecuciones como DataFrame (más recientes primero)."""
        self._require_db()
        query = self.db.query(RunRecord)
        if command:
            query = query.filter(RunRecord.command == command)
        records = query.order_by(RunRecord.id.desc()).limit(limit).all()
        return pd.DataFrame(
            [{
                "id": r.id,
                "command": r.command,
                "status": r.status.value,
                "exit_code": r.exit_code,
                "numeric_mode": r.numeric_mode,
                "digest": r.inputs_digest[:12],
                "created_at": r.created_at,
            } for r in records],
            columns=["id", "command", "status", "exit_code", "numeric_mode", "digest", "created_at"],
        )
