"""
Utilidades compartidas para todo el toolkit.
Funciones reutilizables sin dependencias de dominio.
"""
import hashlib
import json
from pathlib import Path
from typing import Any, List, Sequence


def digest_payload(payload: Any) -> str:
    """
    Calcula un hash SHA-256 estable de un documento JSON.

    Args:
        payload: Objeto serializable a JSON

    Returns:
        str: Digest hexadecimal
    """
    data = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(data.encode("utf-8")).hexdigest()


def read_json(path: str) -> Any:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def write_json(path: str, payload: Any) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=str)
        fh.write("\n")


def mixed_radix_strides(dims: Sequence[int]) -> List[int]:
    """Pasos lexicográficos con la primera coordenada como la más significativa."""
    strides = [1] * len(dims)
    for k in range(len(dims) - 2, -1, -1):
        strides[k] = strides[k + 1] * dims[k + 1]
    return strides


def product_size(dims: Sequence[int]) -> int:
    size = 1
    for d in dims:
        size *= d
    return size
