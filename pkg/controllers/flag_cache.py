# controllers/flag_cache.py
"""
Persistencia de máscaras bool por código (bitsets numpy.packbits en .npy).
"""
import logging
import os
from pathlib import Path
from typing import Callable, Optional

import numpy as np

import config
from controllers.scenario_core import FunctionSpace

logger = logging.getLogger(__name__)


def _space_key(space: FunctionSpace) -> str:
    domain = ".".join(map(str, space.domain))
    codomain = ".".join(map(str, space.codomain))
    return f"D{domain}_C{codomain}"


def cache_path(name: str, space: FunctionSpace) -> Path:
    return Path(config.CACHE_DIR) / f"{name}_{_space_key(space)}.npy"


def load_flags(name: str, space: FunctionSpace) -> Optional[np.ndarray]:
    """Devuelve la máscara guardada o None si no existe o está corrupta."""
    path = cache_path(name, space)
    if not path.exists():
        return None
    try:
        packed = np.load(path, allow_pickle=False)
    except (OSError, ValueError) as e:
        logger.warning(f"⚠️ Ignoring unreadable flag cache {path}: {e}")
        return None
    if packed.dtype != np.uint8 or packed.size != (space.n_functions + 7) // 8:
        logger.warning(f"⚠️ Flag cache {path} has the wrong length; recomputing")
        return None
    flags = np.unpackbits(packed, count=space.n_functions).astype(bool)
    logger.debug(f"flag cache hit: {path}")
    return flags


def save_flags(name: str, space: FunctionSpace, flags: np.ndarray) -> Path:
    path = cache_path(name, space)
    os.makedirs(path.parent, exist_ok=True)
    np.save(path, np.packbits(np.asarray(flags, dtype=bool)), allow_pickle=False)
    logger.info(f"💾 Saved {int(np.count_nonzero(flags)):,} flags to {path}")
    return path


def cached_flags(name: str, space: FunctionSpace, compute: Callable[[], np.ndarray], use_cache: bool = True) -> np.ndarray:
    """Carga la máscara o la calcula y la persiste."""
    if use_cache:
        flags = load_flags(name, space)
        if flags is not None:
            return flags
    flags = np.asarray(compute(), dtype=bool)
    if use_cache:
        save_flags(name, space, flags)
    return flags
