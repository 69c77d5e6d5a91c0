"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class TwoCoverError(Exception):
    """Base class for all errors raised by :mod:`twocover`."""


class ParseError(TwoCoverError, ValueError):
    """Malformed input document.

    ``line`` and ``column`` are 1-based and only set for syntax errors.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)


class ValidationError(TwoCoverError, ValueError):
    """Input violates one or more structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        text = "; ".join(str(v) for v in self.violations)
        super().__init__(text or "invalid input")


class NotAnAutomorphism(TwoCoverError, ValueError):
    """A label permutation does not preserve the depth data.

    ``witness`` is a pair ``(r, r2)`` with ``depth(r, r2) != depth(perm r, perm r2)``.
    """

    def __init__(self, witness: tuple[str, str], message: str):
        self.witness = witness
        super().__init__(message)


class HypothesisError(TwoCoverError, ValueError):
    """The input lies outside the hypotheses of the criterion (e.g. genus 0)."""


class NotSemistableError(TwoCoverError):
    """A stage that needs semi-stable input received a non-semi-stable cover."""

    def __init__(self, message: str, violations=()):
        self.violations = list(violations)
        super().__init__(message)


class GraphError(TwoCoverError, ValueError):
    """Dual-graph construction or Galois action failed."""


class LatticeError(TwoCoverError, ValueError):
    """Inconsistent lattice data (non-positive pairing, broken action, ...)."""


class EnumerationLimitError(TwoCoverError):
    """Brute-force enumeration would exceed the configured bound."""
