"""The abstract contract shared by all spaces.

A *space* is a truncated universe of stems together with an
approximation structure.  Every infinite object of interest is
represented at finite scale by a Stem: a coherent chain of
approximations determined by its top member plus the truncation
parameters carried by the space instance.

The uniform facts this package relies on (and audits rather than
assumes, see audit.py):

  * the chain of a stem is recovered from its top by `restrict`;
  * the neighborhood [a, B] is nonempty exactly when fin_leq(a, top(B));
  * the stems of [a, B] are the extension-closure of `a` below top(B).

All values are immutable; every operation is a pure function, so
instances can be shared freely across threads.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Iterator

from .errors import (
    EmptyNeighborhoodError,
    MixedSpaceError,
    NotInSpaceError,
    OutOfRangeError,
)


@dataclass(frozen=True)
class Approximation:
    """A finite approximation of length `length` in the space `space_tag`.

    `payload` is the space-specific immutable datum; construct these
    through the owning space so the invariants are checked.
    """

    space_tag: str
    payload: Any
    length: int

    def __repr__(self):
        return f"<{self.space_tag}:{self.payload!r}>"


class Space(ABC):
    """Contract every concrete space implements.

    Subclasses are frozen dataclasses carrying the truncation
    parameters (ground bound, field and column bound, domain bound);
    two instances with equal parameters are interchangeable.
    """

    tag: str = "abstract"

    # ----- primitives every space provides -----

    @abstractmethod
    def empty(self) -> Approximation:
        """The unique length-0 approximation."""

    @abstractmethod
    def make(self, payload) -> Approximation:
        """Validate a payload and wrap it; raises InvalidApproximationError."""

    @abstractmethod
    def restrict(self, a: Approximation, n: int) -> Approximation:
        """The length-n member of the chain of any stem topped by `a`.

        Defined for 0 <= n <= a.length, with restrict(a, a.length) == a.
        """

    @abstractmethod
    def fin_leq(self, a: Approximation, b: Approximation) -> bool:
        """The finitization quasi-order on approximations."""

    @abstractmethod
    def extensions_below(
        self, a: Approximation, top: Approximation
    ) -> list[Approximation]:
        """All length-(|a|+1) approximations extending `a` below `top`.

        Raises EmptyNeighborhoodError when `a` is not below `top` at all;
        returns [] when the neighborhood is nonempty but the truncation
        admits no extension.
        """

    @abstractmethod
    def stems(self) -> list[Approximation]:
        """Every stem top in the truncated universe, canonical order."""

    @abstractmethod
    def stem_count(self) -> int:
        """Size of stems() without materializing it."""

    @abstractmethod
    def serialize(self, a: Approximation) -> str:
        """Canonical, whitespace-free text form; round-trips via parse."""

    @abstractmethod
    def parse(self, text: str) -> Approximation:
        """Inverse of serialize."""

    @abstractmethod
    def params_str(self) -> str:
        """Key=value description of the space and its truncation."""

    @abstractmethod
    def can_extend_in_universe(self, top: Approximation) -> bool:
        """Whether any stem of the truncated universe properly extends
        the chain of `top` (stems that cannot are flagged maximal)."""

    # ----- derived operations -----

    def check_tag(self, a: Approximation) -> None:
        if a.space_tag != self.tag:
            raise MixedSpaceError(
                f"approximation from space {a.space_tag!r} used in {self.tag!r}"
            )

    def sort_key(self, a: Approximation):
        return (a.length, self.serialize(a))

    def open_beyond(self, e: Approximation, top: Approximation) -> bool:
        """Whether chains stuck at `e` below `top` continue past the
        stem's materialized data (so their future is genuinely open).

        When `e` ends strictly inside the materialization, the stem's
        own data already determines every continuation and an exhausted
        chain is definitively accounted for.  The conservative default
        treats every boundary as open; concrete spaces tighten it.
        """
        return True

    def chain(self, top: Approximation) -> list[Approximation]:
        return [self.restrict(top, i) for i in range(top.length + 1)]

    def fin_below(self, a: Approximation) -> list[Approximation]:
        """The finite set {b : fin_leq(b, a)}, canonically ordered.

        Default implementation walks the extension tree below `a`
        starting from the empty approximation; spaces override this
        with direct enumerations, and the audit cross-checks the two.
        """
        return self.closure_below(a)

    def closure_below(
        self, a: Approximation, max_length: int | None = None
    ) -> list[Approximation]:
        """Extension-closure of the empty approximation below `a`."""
        out = []
        frontier = [self.empty()]
        while frontier:
            out.extend(frontier)
            if max_length is not None and frontier[0].length >= max_length:
                break
            nxt = []
            for c in frontier:
                nxt.extend(self.extensions_below(c, a))
            frontier = sorted(nxt, key=self.sort_key)
        return sorted(out, key=self.sort_key)

    def iter_neighborhood(
        self, a: Approximation, top: Approximation
    ) -> Iterator[Approximation]:
        """Tops of all stems in [a, stem(top)], canonical depth-first order.

        These are exactly the approximations reachable from `a` by
        repeated extension below `top` (each one, viewed as a stem, has
        `a` in its chain and lies below `top`).
        """
        self.check_tag(a)
        self.check_tag(top)
        if not self.fin_leq(a, top):
            return
        stack = [a]
        while stack:
            cur = stack.pop()
            yield cur
            children = sorted(
                self.extensions_below(cur, top), key=self.sort_key, reverse=True
            )
            stack.extend(children)

    def approximations(self) -> list[Approximation]:
        """Every approximation of the truncated universe, canonical order."""
        seen = {}
        for top in self.stems():
            for b in self.fin_below(top):
                seen[b] = None
        return sorted(seen, key=self.sort_key)


def length(a: Approximation) -> int:
    """The intrinsic length |a| of an approximation."""
    return a.length


@dataclass(frozen=True)
class Stem:
    """A truncated space element: the coherent chain r_0, ..., r_N.

    The chain is determined by its top approximation; the truncation
    parameters live on the space instance.  A stem whose top admits no
    extension within the truncation is *maximal*.
    """

    space: Space
    top: Approximation

    def __post_init__(self):
        self.space.check_tag(self.top)

    @property
    def length(self) -> int:
        return self.top.length

    @property
    def chain(self) -> list[Approximation]:
        return self.space.chain(self.top)

    def approx(self, n: int) -> Approximation:
        """The length-n approximation r_n of this stem."""
        if n < 0 or n > self.length:
            raise OutOfRangeError(
                f"approximation index {n} beyond truncation (chain length {self.length})"
            )
        return self.space.restrict(self.top, n)

    def depth(self, a: Approximation) -> int:
        """Least n with fin_leq(a, r_n); raises NotInSpaceError if none."""
        self.space.check_tag(a)
        for n in range(self.length + 1):
            if self.space.fin_leq(a, self.approx(n)):
                return n
        raise NotInSpaceError(
            f"{self.space.serialize(a)} is not below any approximation of the stem"
        )

    def extensions(self, a: Approximation) -> list[Approximation]:
        return self.space.extensions_below(a, self.top)

    @property
    def is_maximal(self) -> bool:
        return not self.space.can_extend_in_universe(self.top)

    def reducts(self) -> Iterator["Stem"]:
        """All stems below this one (the neighborhood [0, self])."""
        for t in self.space.iter_neighborhood(self.space.empty(), self.top):
            yield Stem(self.space, t)

    def serialize(self) -> str:
        return self.space.serialize(self.top)

    def __repr__(self):
        return f"Stem({self.space.params_str()}, {self.serialize()})"


@dataclass(frozen=True)
class Neighborhood:
    """The set [a, A] of stems below A whose chain passes through a."""

    stem: Stem
    base: Approximation

    def __post_init__(self):
        self.stem.space.check_tag(self.base)

    @property
    def is_empty(self) -> bool:
        return not self.stem.space.fin_leq(self.base, self.stem.top)

    def stems(self) -> Iterator[Stem]:
        space = self.stem.space
        for t in space.iter_neighborhood(self.base, self.stem.top):
            yield Stem(space, t)

    def require_nonempty(self) -> None:
        if self.is_empty:
            raise EmptyNeighborhoodError(
                f"[{self.stem.space.serialize(self.base)}, "
                f"{self.stem.serialize()}] is empty"
            )


def approx(stem: Stem, n: int) -> Approximation:
    """r_n of a stem (module-level alias of Stem.approx)."""
    return stem.approx(n)


def depth(stem: Stem, a: Approximation) -> int:
    """depth of `a` in a stem (module-level alias of Stem.depth)."""
    return stem.depth(a)


def fin_leq(space: Space, a: Approximation, b: Approximation) -> bool:
    return space.fin_leq(a, b)


def fin_below(space: Space, a: Approximation) -> list[Approximation]:
    return space.fin_below(a)


def extensions(a: Approximation, stem: Stem) -> list[Approximation]:
    """The image of [a, stem] under the next-length restriction map."""
    return stem.extensions(a)
