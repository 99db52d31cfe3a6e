"""Integer Laurent polynomials in one variable (plain dict arithmetic)."""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Tuple

__all__ = ["LaurentPoly"]


class LaurentPoly:
    """Immutable Laurent polynomial with integer coefficients.

    Stored as exponent -> coefficient with no zero coefficients.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int] | Iterable[Tuple[int, int]] = ()):
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = coeffs
        clean: Dict[int, int] = {}
        for e, c in items:
            c = int(c)
            if c:
                clean[int(e)] = clean.get(int(e), 0) + c
                if not clean[int(e)]:
                    del clean[int(e)]
        object.__setattr__(self, "coeffs", clean)

    def __setattr__(self, *a):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: 1})

    @classmethod
    def monomial(cls, exp: int, coeff: int = 1) -> "LaurentPoly":
        return cls({exp: coeff})

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPoly({0: other})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            return LaurentPoly({e: c * other for e, c in self.coeffs.items()})
        out: Dict[int, int] = {}
        for e1, c1 in self.coeffs.items():
            for e2, c2 in other.coeffs.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by the variable to the k-th power."""
        return LaurentPoly({e + k: c for e, c in self.coeffs.items()})

    def substitute_power(self, k: int) -> "LaurentPoly":
        """x -> x^k."""
        return LaurentPoly({e * k: c for e, c in self.coeffs.items()})

    def reverse(self) -> "LaurentPoly":
        """x -> 1/x."""
        return LaurentPoly({-e: c for e, c in self.coeffs.items()})

    def evaluate_int(self, x: int) -> int:
        """Exact evaluation at a nonzero integer (rationals cleared by lcm)."""
        if x == 0:
            raise ZeroDivisionError("Laurent polynomial at 0")
        lo = min(self.coeffs, default=0)
        total = 0
        for e, c in self.coeffs.items():
            total += c * x ** (e - lo)
        if lo >= 0:
            return total * x**lo
        denom = x ** (-lo)
        if total % denom:
            raise ValueError(f"evaluation at {x} is not an integer")
        return total // denom

    @property
    def min_exp(self) -> int:
        return min(self.coeffs)

    @property
    def max_exp(self) -> int:
        return max(self.coeffs)

    def items(self):
        return sorted(self.coeffs.items())

    def to_json_dict(self) -> dict:
        return {str(e): c for e, c in sorted(self.coeffs.items())}

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in sorted(self.coeffs.items()):
            if e == 0:
                term = str(abs(c))
            else:
                mag = "" if abs(c) == 1 else str(abs(c)) + "*"
                term = f"{mag}x^{e}" if e != 1 else f"{mag}x"
            if not parts:
                parts.append(("-" if c < 0 else "") + term)
            else:
                parts.append(("- " if c < 0 else "+ ") + term)
        return " ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self.coeffs!r})"
