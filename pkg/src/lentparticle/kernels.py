"""Elementary-tensor kernels and finite chaos vectors.

A kernel of order n is the symmetrization of an elementary tensor
g_1 (x) ... (x) g_n of step functions, scaled by a weight.  Its L2 norm and
the inner product of two such kernels are available in closed form through
the permanent of the Gram matrix of the factors, so every isometry target in
the tests is exact on the kernel side.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvalidKernelError
from .stepfn import StepFunction

MAX_ORDER = 8


def permanent(matrix: np.ndarray) -> float:
    """Permanent of a small square matrix (direct sum over permutations)."""
    m = np.asarray(matrix, dtype=float)
    n = m.shape[0]
    if n == 0:
        return 1.0
    total = 0.0
    rows = range(n)
    for perm in itertools.permutations(rows):
        total += math.prod(m[i, perm[i]] for i in rows)
    return total


@dataclass(frozen=True)
class SimplexKernel:
    """weight * sym(g_1 (x) ... (x) g_n); order 0 is the constant `weight`."""

    order: int
    factors: tuple[StepFunction, ...]
    weight: float = 1.0
    symmetrize: bool = True

    def __post_init__(self):
        if self.order < 0:
            raise InvalidKernelError(f"order must be >= 0, got {self.order}")
        if self.order > MAX_ORDER:
            raise ConfigurationError(f"order {self.order} above maximum {MAX_ORDER}")
        if len(self.factors) != self.order:
            raise InvalidKernelError(
                f"kernel of order {self.order} needs {self.order} factors, got {len(self.factors)}"
            )
        object.__setattr__(self, "factors", tuple(self.factors))

    @classmethod
    def power(cls, h: StepFunction, order: int, weight: float = 1.0) -> "SimplexKernel":
        """h^{(x) order}: the common symmetric special case."""
        return cls(order, (h,) * order, weight, symmetrize=False)

    def gram(self, other: "SimplexKernel") -> np.ndarray:
        return np.array([[f.inner(g) for g in other.factors] for f in self.factors])

    def inner(self, other: "SimplexKernel") -> float:
        """L2(lambda_n) inner product of the two (symmetrized) kernels."""
        if self.order != other.order:
            return 0.0
        if self.order == 0:
            return self.weight * other.weight
        return self.weight * other.weight * permanent(self.gram(other)) / math.factorial(self.order)

    @property
    def norm_sq(self) -> float:
        if self.order == 0:
            return self.weight**2
        if not self.symmetrize:
            # factors declared symmetric as given (h tensor powers)
            return self.weight**2 * math.prod(g.norm_sq for g in self.factors)
        return self.inner(self)

    @property
    def isometry_target(self) -> float:
        """n! * ||f_n||^2 = E[I_n(f_n)^2]."""
        return math.factorial(self.order) * self.norm_sq

    def contractions(self) -> list[tuple[StepFunction, "SimplexKernel"]]:
        """Slices for the derivative: D_s I_n(f) = sum_i g_i(s) I_{n-1}(sym(others)).

        Returns (g_i, order-lowered kernel) pairs; the weight rides on the
        reduced kernel.
        """
        out = []
        for i, g in enumerate(self.factors):
            rest = self.factors[:i] + self.factors[i + 1 :]
            out.append((g, SimplexKernel(self.order - 1, rest, self.weight)))
        return out

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "factors": [g.to_dict() for g in self.factors],
            "weight": self.weight,
            "symmetrize": self.symmetrize,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimplexKernel":
        return cls(
            int(d["order"]),
            tuple(StepFunction.from_dict(f) for f in d["factors"]),
            float(d.get("weight", 1.0)),
            bool(d.get("symmetrize", True)),
        )


@dataclass(frozen=True)
class ChaosVector:
    """Finite chaos expansion: constant term plus a list of kernels.

    Several kernels may share an order; norms account for cross terms through
    the closed-form inner products.
    """

    constant: float = 0.0
    kernels: tuple[SimplexKernel, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "kernels", tuple(self.kernels))

    @property
    def max_order(self) -> int:
        return max((k.order for k in self.kernels), default=0)

    def _order_groups(self) -> dict[int, list[SimplexKernel]]:
        groups: dict[int, list[SimplexKernel]] = {}
        for k in self.kernels:
            groups.setdefault(k.order, []).append(k)
        return groups

    @property
    def norm_sq(self) -> float:
        """||F||^2 = f(0)^2 + sum_n n! ||f_n||^2."""
        total = self.constant**2
        for n, group in self._order_groups().items():
            if n == 0:
                total += math.factorial(0) * sum(a.inner(b) for a in group for b in group)
                continue
            block = sum(a.inner(b) for a in group for b in group)
            total += math.factorial(n) * block
        return total

    @property
    def gradient_energy(self) -> float:
        """sum_n n * n! ||f_n||^2, the Ornstein-Uhlenbeck domain norm of F."""
        total = 0.0
        for n, group in self._order_groups().items():
            block = sum(a.inner(b) for a in group for b in group)
            total += n * math.factorial(n) * block
        return total

    def to_json(self) -> str:
        return json.dumps(
            {"constant": self.constant, "kernels": [k.to_dict() for k in self.kernels]},
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ChaosVector":
        d = json.loads(text)
        return cls(
            float(d.get("constant", 0.0)),
            tuple(SimplexKernel.from_dict(k) for k in d.get("kernels", ())),
        )

    @classmethod
    def from_file(cls, path) -> "ChaosVector":
        with open(path) as fh:
            return cls.from_json(fh.read())
