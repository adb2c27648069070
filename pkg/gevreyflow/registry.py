"""
ProblemRegistry - A write-once mapping of named problem documents.

Reads like a normal dict. Registering a name that is already taken raises
DuplicateProblemError and leaves the first document in place.
"""

from collections.abc import Mapping
from typing import Any, Dict, Iterator, Optional

from .problem import ProblemError, ProblemSpec, ProblemValidationError


class DuplicateProblemError(ProblemError):
    """Raised when a problem name is registered twice."""

    def __init__(self, name: str, existing: Dict[str, Any]):
        self.name = name
        self.existing = existing
        super().__init__(
            f"Problem '{name}' is already registered (field {existing.get('field')!r})"
        )


class ProblemRegistry(Mapping):
    """
    Name -> problem document (the same JSON shape as a problem file).

    Examples:
        >>> registry = ProblemRegistry()
        >>> registry["heat"] = {"space_vars": ["z"], "components": ["u"],
        ...                     "field": ["D(u,[2])"], "initial": ["inv(1-z)"],
        ...                     "order_t": 4, "trunc_deg": 8}
        >>> registry.get_problem("heat").s
        2
        >>> registry["heat"] = {}
        DuplicateProblemError: Problem 'heat' is already registered (field ['D(u,[2])'])
    """

    def __init__(self, initial: Optional[Dict[str, Dict[str, Any]]] = None):
        self._data: Dict[str, Dict[str, Any]] = {}
        for name, document in (initial or {}).items():
            self.register(name, document)

    def register(self, name: str, document: Dict[str, Any]) -> None:
        if name in self._data:
            raise DuplicateProblemError(name, self._data[name])
        # validates eagerly so a broken built-in fails at import
        ProblemSpec.from_dict(document)
        self._data[name] = dict(document)

    def __setitem__(self, name: str, document: Dict[str, Any]) -> None:
        self.register(name, document)

    def __getitem__(self, name: str) -> Dict[str, Any]:
        return self._data[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._data)

    def __len__(self) -> int:
        return len(self._data)

    def __repr__(self) -> str:
        return f"ProblemRegistry({sorted(self._data)!r})"

    def get_problem(
        self,
        name: str,
        *,
        order_t: Optional[int] = None,
        trunc_deg: Optional[int] = None,
    ) -> ProblemSpec:
        """Build the ProblemSpec for name, optionally overriding K and D."""
        if name not in self._data:
            known = ", ".join(sorted(self._data))
            raise ProblemValidationError(f"Unknown problem '{name}'. Known problems: {known}")
        return ProblemSpec.from_dict(self._data[name]).with_overrides(
            order_t=order_t, trunc_deg=trunc_deg
        )
