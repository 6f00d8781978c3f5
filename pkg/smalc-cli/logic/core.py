"""
Shared error types and the ordered shard runner used by the search commands.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import islice
from typing import Any, Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

logger = logging.getLogger(__name__)


class SmalcError(Exception):
    """
    Base class for every domain error raised by the logic package.

    Args:
        message (str): Short description of what failed.
        problems (Optional[Sequence[str]]): Individual violations, one entry each.
    """

    def __init__(self, message: str, problems: Optional[Sequence[str]] = None):
        super().__init__(message)
        self.message: str = message
        self.problems: List[str] = list(problems or [])

    def __str__(self) -> str:
        if not self.problems:
            return self.message
        return self.message + "\n" + "\n".join(f"  - {p}" for p in self.problems)


class FormulaSyntaxError(SmalcError):
    """Raised when formula, sequent or derivation text does not parse."""

    def __init__(self, message: str, position: Optional[int] = None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"{message}{where}")
        self.position: Optional[int] = position


class SignatureError(SmalcError):
    pass


class DerivationError(SmalcError):
    pass


class QuantaleError(SmalcError):
    pass


class InterpretationError(SmalcError):
    pass


class RepresentationError(QuantaleError):
    pass


class LexiconError(SmalcError):
    pass


class ShardRunner:
    """
    Maps a pure function over independent shards.

    With ``jobs == 1`` everything runs inline. Otherwise shards are submitted to
    a thread pool in windows of ``2 * jobs`` and results are consumed strictly
    in submission order, so the answer never depends on the schedule.
    """

    def __init__(self, jobs: int = 1):
        if jobs < 1:
            raise ValueError("jobs must be at least 1")
        self.jobs: int = jobs

    def first(
        self,
        func: Callable[[Any], Any],
        shards: Iterable[Any],
        accept: Callable[[Any], bool] = lambda result: result is not None,
    ) -> Tuple[Optional[int], Any]:
        """
        Return the position and result of the first shard whose result is accepted.

        Args:
            func (Callable[[Any], Any]): Pure function applied to each shard.
            shards (Iterable[Any]): Shards in their declared order.
            accept (Callable[[Any], bool]): Predicate selecting a final result.

        Returns:
            Tuple[Optional[int], Any]: ``(position, result)``, or ``(None, None)``
            when no shard produced an accepted result.
        """
        for position, result in self._ordered(func, shards):
            if accept(result):
                return position, result
        return None, None

    def map(self, func: Callable[[Any], Any], shards: Iterable[Any]) -> List[Any]:
        """Return ``[func(s) for s in shards]`` computed with the configured workers."""
        return [result for _, result in self._ordered(func, shards)]

    def _ordered(
        self, func: Callable[[Any], Any], shards: Iterable[Any]
    ) -> Iterator[Tuple[int, Any]]:
        iterator = iter(shards)
        if self.jobs == 1:
            for position, shard in enumerate(iterator):
                yield position, func(shard)
            return

        position = 0
        with ThreadPoolExecutor(max_workers=self.jobs) as pool:
            while True:
                window = list(islice(iterator, 2 * self.jobs))
                if not window:
                    return
                futures = [pool.submit(func, shard) for shard in window]
                logger.debug("submitted %d shards starting at %d", len(window), position)
                try:
                    for future in futures:
                        yield position, future.result()
                        position += 1
                finally:
                    for future in futures:
                        future.cancel()
