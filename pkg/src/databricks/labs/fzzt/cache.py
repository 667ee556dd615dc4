import json
import logging
import os
import tempfile
from pathlib import Path

from databricks.labs.fzzt.errors import UnsupportedFormat
from databricks.labs.fzzt.precision import Numerics
from databricks.labs.fzzt.xi import XiFunction, ZeroList, find_zeros

logger = logging.getLogger(__name__)


class ZeroCache:
    """JSON file of Ξ zeros shared between commands.

    A cached list is reused when it was computed at no lower precision and scanned at least as
    high as requested; otherwise the zeros are recomputed and the file is replaced atomically. A file written
    under another ``format_version`` is rejected rather than recomputed over."""

    def __init__(self, path: str | Path | None):
        self._path = None if path is None else Path(path)

    @property
    def path(self) -> Path | None:
        return self._path

    def load(self) -> ZeroList | None:
        if self._path is None or not self._path.exists():
            return None
        try:
            raw = json.loads(self._path.read_text(encoding="utf-8"))
            return ZeroList.from_dict(raw)
        except UnsupportedFormat:
            raise
        except (ValueError, KeyError, TypeError, AttributeError) as e:
            logger.warning(f"ignoring unreadable zero cache {self._path}: {e}")
            return None

    def save(self, zeros: ZeroList) -> None:
        if self._path is None:
            return
        self._path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(prefix=f".{self._path.name}.", suffix=".tmp", dir=self._path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(zeros.as_dict(), f, indent=2)
            os.replace(tmp, self._path)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise
        logger.info(f"Saved {len(zeros)} zeros up to {zeros.scan_height} to {self._path}")

    def zeros(self, T: float, step: float, numerics: Numerics, xi: XiFunction | None = None) -> ZeroList:
        cached = self.load()
        if cached is not None and cached.digits >= numerics.digits and cached.scan_height >= T:
            logger.info(f"Zero cache hit: {self._path} covers [0, {cached.scan_height}] at {cached.digits} digits")
            return cached.below(T)
        if self._path is not None:
            logger.info(f"Zero cache miss: recomputing zeros up to {T} at {numerics.digits} digits")
        zeros = find_zeros(T, step, numerics, xi=xi)
        self.save(zeros)
        return zeros
