"""Exact arithmetic foundation: coupling polynomials, sparse multivariate
polynomials, rational sections with pair-difference denominators, and the
symmetric-group action on all of them.

Scalars are polynomials in a formal coupling constant ``c`` with Fraction
coefficients (:class:`CouplingPoly`), so identities can be certified for all
couplings at once.  A :class:`RationalSection` is a polynomial numerator over
a product of pair-difference powers ``prod (x_i - x_j)^d_ij``; this class of
functions is closed under all the operators used in this package (partial
derivatives, coordinate swaps, multiplication by ``1/(x_i - x_j)``).

Coordinates are 0-indexed: ``x0 .. x_{N-1}``.
"""

from __future__ import annotations

import itertools
import re
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "CouplingPoly",
    "MultiPoly",
    "Permutation",
    "RationalSection",
    "PoleError",
    "monomial_exponents",
    "parse_section",
]


class PoleError(ZeroDivisionError):
    """Evaluation at a point lying on a pair-difference hyperplane."""

    def __init__(self, pair: tuple[int, int]):
        self.pair = pair
        super().__init__(f"evaluation point lies on the pole x{pair[0]} = x{pair[1]}")


def _as_rat(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class CouplingPoly:
    """Exact univariate polynomial in the formal coupling ``c``.

    Canonical form: the highest stored coefficient is nonzero; the zero
    polynomial is the empty tuple.  All arithmetic is exact.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Fraction | int] = ()):
        cs = [_as_rat(v) for v in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, value) -> "CouplingPoly":
        return cls((_as_rat(value),))

    @classmethod
    def c(cls, power: int = 1) -> "CouplingPoly":
        """The monomial c**power."""
        return cls((0,) * power + (1,))

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int:
        """Degree in c; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def component(self, power: int) -> Fraction:
        """Coefficient of c**power."""
        if 0 <= power < len(self.coeffs):
            return self.coeffs[power]
        return Fraction(0)

    def eval_at(self, cval) -> Fraction:
        cval = _as_rat(cval)
        acc = Fraction(0)
        for coef in reversed(self.coeffs):
            acc = acc * cval + coef
        return acc

    def shift(self, power: int) -> "CouplingPoly":
        """Multiply by c**power."""
        if power == 0 or self.is_zero():
            return self
        return CouplingPoly((Fraction(0),) * power + self.coeffs)

    def __add__(self, other: "CouplingPoly") -> "CouplingPoly":
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] += v
        return CouplingPoly(out)

    def __neg__(self) -> "CouplingPoly":
        return CouplingPoly(tuple(-v for v in self.coeffs))

    def __sub__(self, other: "CouplingPoly") -> "CouplingPoly":
        return self + (-other)

    def __mul__(self, other) -> "CouplingPoly":
        if isinstance(other, (int, Fraction)):
            q = _as_rat(other)
            if q == 0:
                return CouplingPoly()
            return CouplingPoly(tuple(v * q for v in self.coeffs))
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return CouplingPoly()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, va in enumerate(a):
            if va == 0:
                continue
            for j, vb in enumerate(b):
                out[i + j] += va * vb
        return CouplingPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CouplingPoly.const(other)
        if not isinstance(other, CouplingPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in enumerate(self.coeffs):
            if v == 0:
                continue
            if k == 0:
                parts.append(str(v))
            elif k == 1:
                parts.append(f"{v} c")
            else:
                parts.append(f"{v} c^{k}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"CouplingPoly({self})"


CouplingPoly.ZERO = CouplingPoly()
CouplingPoly.ONE = CouplingPoly.const(1)


def _coupling(value) -> CouplingPoly:
    if isinstance(value, CouplingPoly):
        return value
    return CouplingPoly.const(_as_rat(value))


def monomial_exponents(arity: int, max_degree: int) -> list[tuple[int, ...]]:
    """All exponent vectors of total degree <= max_degree, ordered by
    (total degree, exponent tuple).  Deterministic spanning set for suites."""
    out = []
    for deg in range(max_degree + 1):
        out.extend(sorted(_compositions(deg, arity)))
    return out


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


class MultiPoly:
    """Sparse exact polynomial in x0..x_{N-1} with CouplingPoly coefficients.

    ``terms`` maps exponent tuples (length == arity) to nonzero coefficients.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[tuple[int, ...], CouplingPoly] | None = None):
        if arity < 1:
            raise ValueError("arity must be >= 1")
        self.arity = arity
        clean: dict[tuple[int, ...], CouplingPoly] = {}
        if terms:
            for exp, coef in terms.items():
                if len(exp) != arity:
                    raise ValueError(f"exponent {exp} has wrong length for arity {arity}")
                if not coef.is_zero():
                    clean[tuple(exp)] = coef
        self.terms = clean

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "MultiPoly":
        return cls(arity)

    @classmethod
    def constant(cls, arity: int, value) -> "MultiPoly":
        return cls(arity, {(0,) * arity: _coupling(value)})

    @classmethod
    def one(cls, arity: int) -> "MultiPoly":
        return cls.constant(arity, 1)

    @classmethod
    def variable(cls, arity: int, index: int) -> "MultiPoly":
        return cls.monomial(arity, tuple(1 if i == index else 0 for i in range(arity)))

    @classmethod
    def monomial(cls, arity: int, exponents: Sequence[int], coeff=1) -> "MultiPoly":
        return cls(arity, {tuple(exponents): _coupling(coeff)})

    # -- structure -------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        """Max total degree in x; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def coupling_degree(self) -> int:
        return max((c.degree() for c in self.terms.values()), default=-1)

    def coupling_component(self, power: int) -> "MultiPoly":
        """The polynomial multiplying c**power (a coupling-free MultiPoly)."""
        out = {}
        for exp, coef in self.terms.items():
            r = coef.component(power)
            if r != 0:
                out[exp] = CouplingPoly.const(r)
        return MultiPoly(self.arity, out)

    def specialize_coupling(self, cval) -> "MultiPoly":
        out = {}
        for exp, coef in self.terms.items():
            v = coef.eval_at(cval)
            if v != 0:
                out[exp] = CouplingPoly.const(v)
        return MultiPoly(self.arity, out)

    # -- ring operations -------------------------------------------------

    def _check(self, other: "MultiPoly") -> None:
        if self.arity != other.arity:
            raise ValueError(f"arity mismatch: {self.arity} != {other.arity}")

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check(other)
        out = dict(self.terms)
        for exp, coef in other.terms.items():
            cur = out.get(exp)
            s = coef if cur is None else cur + coef
            if s.is_zero():
                out.pop(exp, None)
            else:
                out[exp] = s
        res = MultiPoly.__new__(MultiPoly)
        res.arity = self.arity
        res.terms = out
        return res

    def __neg__(self) -> "MultiPoly":
        res = MultiPoly.__new__(MultiPoly)
        res.arity = self.arity
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction, CouplingPoly)):
            return self.scale(other)
        self._check(other)
        out: dict[tuple[int, ...], CouplingPoly] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                exp = tuple(a + b for a, b in zip(ea, eb))
                prod = ca * cb
                cur = out.get(exp)
                s = prod if cur is None else cur + prod
                if s.is_zero():
                    out.pop(exp, None)
                else:
                    out[exp] = s
        res = MultiPoly.__new__(MultiPoly)
        res.arity = self.arity
        res.terms = out
        return res

    __rmul__ = __mul__

    def scale(self, factor) -> "MultiPoly":
        factor = _coupling(factor)
        if factor.is_zero():
            return MultiPoly.zero(self.arity)
        return MultiPoly(self.arity, {e: c * factor for e, c in self.terms.items()})

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.one(self.arity)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.arity == other.arity and self.terms == other.terms

    __hash__ = None  # mutable dict inside; sections are compared, not hashed

    # -- calculus and substitutions ---------------------------------------

    def partial(self, k: int) -> "MultiPoly":
        """Exact partial derivative with respect to x_k."""
        out: dict[tuple[int, ...], CouplingPoly] = {}
        for exp, coef in self.terms.items():
            e = exp[k]
            if e == 0:
                continue
            newexp = exp[:k] + (e - 1,) + exp[k + 1:]
            add = coef * Fraction(e)
            cur = out.get(newexp)
            s = add if cur is None else cur + add
            if s.is_zero():
                out.pop(newexp, None)
            else:
                out[newexp] = s
        return MultiPoly(self.arity, out)

    def substitute_var(self, i: int, j: int) -> "MultiPoly":
        """Substitute x_i -> x_j (exponent of i folded onto j)."""
        out: dict[tuple[int, ...], CouplingPoly] = {}
        for exp, coef in self.terms.items():
            e = list(exp)
            e[j] += e[i]
            e[i] = 0
            key = tuple(e)
            cur = out.get(key)
            s = coef if cur is None else cur + coef
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
        return MultiPoly(self.arity, out)

    def substitute_shift(self, k: int, j: int, alpha) -> "MultiPoly":
        """Substitute x_k -> x_k + alpha * x_j (exact; j != k)."""
        alpha = _as_rat(alpha)
        if j == k:
            raise ValueError("shift source and target must differ")
        out = MultiPoly.zero(self.arity)
        xk = MultiPoly.variable(self.arity, k)
        xj_scaled = MultiPoly.variable(self.arity, j).scale(alpha)
        shifted = xk + xj_scaled
        # binomial expansion per term, grouped by the exponent of x_k
        powers: dict[int, MultiPoly] = {0: MultiPoly.one(self.arity)}
        maxe = max((e[k] for e in self.terms), default=0)
        for m in range(1, maxe + 1):
            powers[m] = powers[m - 1] * shifted
        for exp, coef in self.terms.items():
            rest = exp[:k] + (0,) + exp[k + 1:]
            out = out + powers[exp[k]].scale(coef) * MultiPoly.monomial(self.arity, rest)
        return out

    def substitute_scale(self, k: int, q) -> "MultiPoly":
        """Substitute x_k -> q * x_k."""
        q = _as_rat(q)
        out = {}
        for exp, coef in self.terms.items():
            c = coef * q ** exp[k]
            if not c.is_zero():
                out[exp] = c
        return MultiPoly(self.arity, out)

    def permute(self, sigma: "Permutation") -> "MultiPoly":
        """Action on functions: x_k is mapped to x_{sigma(k)}."""
        if sigma.size != self.arity:
            raise ValueError("permutation size does not match arity")
        inv = sigma.inverse()
        out = {}
        for exp, coef in self.terms.items():
            out[tuple(exp[inv(j)] for j in range(self.arity))] = coef
        return MultiPoly(self.arity, out)

    def eval(self, point: Sequence[Fraction | int], cval=0) -> Fraction:
        if len(point) != self.arity:
            raise ValueError("point has wrong dimension")
        pt = [_as_rat(v) for v in point]
        total = Fraction(0)
        for exp, coef in self.terms.items():
            val = coef.eval_at(cval)
            for x, e in zip(pt, exp):
                if e:
                    val *= x ** e
            total += val
        return total

    def divide_by_difference(self, i: int, j: int) -> "MultiPoly | None":
        """Exact quotient by (x_i - x_j) via synthetic division in x_i,
        or None when not divisible."""
        if not self.substitute_var(i, j).is_zero():
            return None
        if self.is_zero():
            return self
        # coefficients of x_i^m, exponent slot i zeroed
        by_deg: dict[int, dict[tuple[int, ...], CouplingPoly]] = {}
        for exp, coef in self.terms.items():
            m = exp[i]
            key = exp[:i] + (0,) + exp[i + 1:]
            by_deg.setdefault(m, {})[key] = coef
        top = max(by_deg)
        coeffs = {m: MultiPoly(self.arity, t) for m, t in by_deg.items()}
        zero = MultiPoly.zero(self.arity)
        quot: dict[int, MultiPoly] = {}
        carry = zero
        for m in range(top, 0, -1):
            q = coeffs.get(m, zero) + carry
            quot[m - 1] = q
            carry = q.shift_var(j)
        # remainder must vanish (guaranteed by the substitution test)
        out = MultiPoly.zero(self.arity)
        for m, q in quot.items():
            if q.is_zero():
                continue
            out = out + q * MultiPoly.monomial(self.arity, tuple(m if t == i else 0 for t in range(self.arity)))
        return out

    def shift_var(self, j: int) -> "MultiPoly":
        """Multiply by x_j."""
        out = {}
        for exp, coef in self.terms.items():
            out[exp[:j] + (exp[j] + 1,) + exp[j + 1:]] = coef
        res = MultiPoly.__new__(MultiPoly)
        res.arity = self.arity
        res.terms = out
        return res

    # -- text form ---------------------------------------------------------

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms):
            parts.append(f"({self.terms[exp]}) x^({','.join(map(str, exp))})")
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MultiPoly[{self.arity}]({self.to_text()})"


class Permutation:
    """Element of S_N as a bijection on {0..N-1}.

    Composition convention: ``(sigma * tau)(i) == sigma(tau(i))``, so that the
    function action ``f.permute`` is a left group action.
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images)-1}: {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        if i == j:
            raise ValueError("transposition needs distinct indices")
        im = list(range(n))
        im[i], im[j] = j, i
        return cls(im)

    @classmethod
    def all_elements(cls, n: int) -> list["Permutation"]:
        """All of S_n in a fixed (lexicographic) order."""
        return [cls(p) for p in itertools.permutations(range(n))]

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.size != other.size:
            raise ValueError("size mismatch")
        return Permutation(tuple(self.images[other.images[i]] for i in range(self.size)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, v in enumerate(self.images):
            inv[v] = i
        return Permutation(inv)

    def sign(self) -> int:
        seen = [False] * self.size
        sign = 1
        for start in range(self.size):
            if seen[start]:
                continue
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.images[i]
                length += 1
            if length % 2 == 0:
                sign = -sign
        return sign

    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.images))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation{self.images}"


def _pair(i: int, j: int) -> tuple[int, int]:
    if i == j:
        raise ValueError("pair indices must differ")
    return (i, j) if i < j else (j, i)


class RationalSection:
    """``num / prod_{i<j} (x_i - x_j)^d_ij`` in reduced canonical form.

    Reduced means no pair difference with positive exponent divides the
    numerator, which makes structural equality canonical.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: Mapping[tuple[int, int], int] | None = None,
                 reduce: bool = True):
        self.num = num
        clean: dict[tuple[int, int], int] = {}
        if den:
            for (i, j), d in den.items():
                if d < 0:
                    raise ValueError("denominator exponents must be >= 0")
                if d > 0:
                    clean[_pair(i, j)] = clean.get(_pair(i, j), 0) + d
        self.den = clean
        if reduce:
            self._reduce()

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_poly(cls, p: MultiPoly) -> "RationalSection":
        return cls(p, None, reduce=False)

    @classmethod
    def zero(cls, arity: int) -> "RationalSection":
        return cls(MultiPoly.zero(arity), None, reduce=False)

    @classmethod
    def one(cls, arity: int) -> "RationalSection":
        return cls(MultiPoly.one(arity), None, reduce=False)

    @classmethod
    def monomial(cls, arity: int, exponents: Sequence[int], coeff=1) -> "RationalSection":
        return cls(MultiPoly.monomial(arity, exponents, coeff), None, reduce=False)

    @classmethod
    def inverse_difference(cls, arity: int, i: int, j: int, power: int = 1) -> "RationalSection":
        """1 / (x_i - x_j)^power; for i > j the sign moves to the numerator."""
        sign = 1 if i < j else (-1) ** power
        return cls(MultiPoly.constant(arity, sign), {_pair(i, j): power}, reduce=False)

    # -- canonical form ---------------------------------------------------

    def _reduce(self) -> None:
        if self.num.is_zero():
            self.den = {}
            return
        changed = True
        while changed and self.den:
            changed = False
            for (i, j), d in list(self.den.items()):
                while d > 0:
                    q = self.num.divide_by_difference(i, j)
                    if q is None:
                        break
                    self.num = q
                    d -= 1
                    changed = True
                if d == 0:
                    del self.den[(i, j)]
                else:
                    self.den[(i, j)] = d
                if self.num.is_zero():
                    self.den = {}
                    return

    @property
    def arity(self) -> int:
        return self.num.arity

    def is_zero(self) -> bool:
        return self.num.is_zero()

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "RationalSection") -> None:
        if self.arity != other.arity:
            raise ValueError("arity mismatch")

    def _raise_to_den(self, target: Mapping[tuple[int, int], int]) -> MultiPoly:
        """Numerator after extending this section's denominator to ``target``."""
        num = self.num
        for pair, d in target.items():
            extra = d - self.den.get(pair, 0)
            if extra < 0:
                raise ValueError("target denominator is not a multiple")
            if extra:
                i, j = pair
                diff = MultiPoly.variable(self.arity, i) - MultiPoly.variable(self.arity, j)
                for _ in range(extra):
                    num = num * diff
        return num

    def __add__(self, other: "RationalSection") -> "RationalSection":
        self._check(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        target = dict(self.den)
        for pair, d in other.den.items():
            target[pair] = max(target.get(pair, 0), d)
        return RationalSection(self._raise_to_den(target) + other._raise_to_den(target), target)

    def __neg__(self) -> "RationalSection":
        return RationalSection(-self.num, self.den, reduce=False)

    def __sub__(self, other: "RationalSection") -> "RationalSection":
        return self + (-other)

    def __mul__(self, other) -> "RationalSection":
        if isinstance(other, (int, Fraction, CouplingPoly)):
            return self.scale(other)
        self._check(other)
        den = dict(self.den)
        for pair, d in other.den.items():
            den[pair] = den.get(pair, 0) + d
        return RationalSection(self.num * other.num, den)

    __rmul__ = __mul__

    def scale(self, factor) -> "RationalSection":
        factor = _coupling(factor)
        if factor.is_zero():
            return RationalSection.zero(self.arity)
        return RationalSection(self.num.scale(factor), self.den, reduce=False)

    def mul_inverse_difference(self, i: int, j: int, power: int = 1) -> "RationalSection":
        """Multiply by 1/(x_i - x_j)^power."""
        return self * RationalSection.inverse_difference(self.arity, i, j, power)

    def partial(self, k: int) -> "RationalSection":
        """Quotient-rule derivative; exact and reduced."""
        result = RationalSection(self.num.partial(k), self.den)
        for (i, j), d in self.den.items():
            if k != i and k != j:
                continue
            sign = 1 if k == i else -1
            den = dict(self.den)
            den[(i, j)] = d + 1
            result = result + RationalSection(self.num.scale(Fraction(-d * sign)), den)
        return result

    def permute(self, sigma: Permutation) -> "RationalSection":
        """Argument permutation; denominator sign flips fold into the numerator."""
        num = self.num.permute(sigma)
        den: dict[tuple[int, int], int] = {}
        flip = 0
        for (i, j), d in self.den.items():
            a, b = sigma(i), sigma(j)
            if a > b:
                flip += d
            den[_pair(a, b)] = den.get(_pair(a, b), 0) + d
        if flip % 2:
            num = -num
        return RationalSection(num, den, reduce=False)

    def coupling_component(self, power: int) -> "RationalSection":
        return RationalSection(self.num.coupling_component(power), self.den)

    def specialize_coupling(self, cval) -> "RationalSection":
        return RationalSection(self.num.specialize_coupling(cval), self.den)

    def eval(self, point: Sequence[Fraction | int], cval=0) -> Fraction:
        pt = [_as_rat(v) for v in point]
        den = Fraction(1)
        for (i, j), d in self.den.items():
            diff = pt[i] - pt[j]
            if diff == 0:
                raise PoleError((i, j))
            den *= diff ** d
        return self.num.eval(pt, cval) / den

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalSection):
            return NotImplemented
        return self.den == other.den and self.num == other.num

    __hash__ = None

    # -- canonical text form ------------------------------------------------

    def to_text(self) -> str:
        num = self.num.to_text()
        if not self.den:
            return num
        den = " ".join(f"(x{i}-x{j})^{d}" for (i, j), d in sorted(self.den.items()))
        return f"[{num}] / [{den}]"

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"RationalSection({self.to_text()})"


# -- parsing of the canonical text form --------------------------------------

_DEN_RE = re.compile(r"\(x(\d+)-x(\d+)\)\^(\d+)")
_TERM_RE = re.compile(r"\((?P<coef>[^()]*)\) x\^\((?P<exp>[-\d,\s]*)\)")
_CPART_RE = re.compile(r"^(?P<q>-?\d+(?:/\d+)?)(?: c(?:\^(?P<k>\d+))?)?$")


def _parse_coupling(text: str) -> CouplingPoly:
    text = text.strip()
    if text == "0":
        return CouplingPoly.ZERO
    coeffs: dict[int, Fraction] = {}
    for part in text.split(" + "):
        m = _CPART_RE.match(part.strip())
        if not m:
            raise ValueError(f"bad coupling term: {part!r}")
        k = 0
        if "c" in part:
            k = int(m.group("k")) if m.group("k") else 1
        coeffs[k] = coeffs.get(k, Fraction(0)) + Fraction(m.group("q"))
    top = max(coeffs)
    return CouplingPoly(tuple(coeffs.get(i, Fraction(0)) for i in range(top + 1)))


def _parse_multipoly(text: str, arity: int | None = None) -> MultiPoly:
    text = text.strip()
    if text == "0":
        if arity is None:
            raise ValueError("cannot infer arity of the zero polynomial")
        return MultiPoly.zero(arity)
    terms: dict[tuple[int, ...], CouplingPoly] = {}
    pos = 0
    for m in _TERM_RE.finditer(text):
        exp = tuple(int(v) for v in m.group("exp").split(","))
        terms[exp] = _parse_coupling(m.group("coef"))
        pos = m.end()
    if not terms or pos == 0:
        raise ValueError(f"cannot parse polynomial text: {text!r}")
    ar = len(next(iter(terms)))
    if arity is not None and ar != arity:
        raise ValueError("arity mismatch in polynomial text")
    return MultiPoly(ar, terms)


def parse_section(text: str, arity: int | None = None) -> RationalSection:
    """Inverse of :meth:`RationalSection.to_text` (round-trip guaranteed)."""
    text = text.strip()
    if text.startswith("["):
        numtext, dentext = text.rsplit(" / ", 1)
        num = _parse_multipoly(numtext.strip()[1:-1], arity)
        den = {}
        for m in _DEN_RE.finditer(dentext.strip()[1:-1]):
            den[(int(m.group(1)), int(m.group(2)))] = int(m.group(3))
        return RationalSection(num, den, reduce=False)
    return RationalSection.from_poly(_parse_multipoly(text, arity))
