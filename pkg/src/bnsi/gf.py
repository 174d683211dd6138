"""Finite fields GF(p^k) and dense matrices over them.

Elements are integers in [0, q). The base-p digits of an element are the
coefficients of its polynomial representative, constant term first, so
in GF(16) the element 2 is x and 3 is x + 1. Extension fields are built
from Conway polynomials, which makes the integer encoding portable.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels
from ._conway import CONWAY
from ._kernels_py import _add as _vadd
from ._kernels_py import _mul as _vmul
from ._kernels_py import _neg as _vneg
from .errors import DependentRows, DimensionMismatch, FieldError, ParseError, ZeroInverse

MAX_Q = 65536


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^k, raising FieldError when q is not a prime power."""
    if q < 2:
        raise FieldError(f"field size must be a prime power >= 2, got {q}")
    for p in _prime_factors(q)[:1]:
        k, r = 0, q
        while r % p == 0:
            r //= p
            k += 1
        if r == 1:
            return p, k
    raise FieldError(f"field size {q} is not a prime power")


def poly_mulmod(a: int, b: int, p: int, k: int, modulus: tuple[int, ...]) -> int:
    """Schoolbook product of two encoded elements reduced by ``modulus``.

    Slow on purpose; serves as the reference the log tables are checked against.
    """
    if k == 1:
        return a * b % p
    da = [(a // p**i) % p for i in range(k)]
    db = [(b // p**i) % p for i in range(k)]
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(da):
        if x:
            for j, y in enumerate(db):
                prod[i + j] = (prod[i + j] + x * y) % p
    # modulus is monic; x^k = -(lower coefficients)
    for deg in range(2 * k - 2, k - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for j in range(k):
                prod[deg - k + j] = (prod[deg - k + j] - c * modulus[j]) % p
    return sum(prod[i] * p**i for i in range(k))


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^k). Construct with ``FieldSpec(p, k)`` or ``FieldSpec.of(q)``."""

    p: int
    k: int = 1

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise FieldError(f"characteristic must be prime, got {self.p}")
        if not isinstance(self.k, int) or self.k < 1:
            raise FieldError(f"extension degree must be >= 1, got {self.k}")
        if self.p**self.k > MAX_Q:
            raise FieldError(f"field size {self.p}^{self.k} exceeds {MAX_Q}")
        if self.k > 1 and (self.p, self.k) not in CONWAY:
            raise FieldError(f"no Conway polynomial for GF({self.p}^{self.k})")

    @classmethod
    def of(cls, q: int) -> "FieldSpec":
        p, k = prime_power(int(q))
        return cls(p, k)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def modulus(self) -> tuple[int, ...]:
        """Monic modulus coefficients, constant term first."""
        if self.k == 1:
            return (0, 1)
        return CONWAY[(self.p, self.k)]

    def __str__(self):
        return f"GF({self.q})"

    @cached_property
    def primitive(self) -> int:
        if self.k > 1:
            return self.p  # the class of x; Conway polynomials are primitive
        if self.p == 2:
            return 1
        fs = _prime_factors(self.p - 1)
        for g in range(2, self.p):
            if all(pow(g, (self.p - 1) // f, self.p) != 1 for f in fs):
                return g
        raise AssertionError("unreachable")

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray]:
        q = self.q
        exp = np.zeros(2 * (q - 1), dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)
        g, cur = self.primitive, 1
        seen = np.zeros(q, dtype=bool)
        for i in range(q - 1):
            if seen[cur]:
                raise FieldError(f"{g} is not primitive in {self}")
            seen[cur] = True
            exp[i] = cur
            log[cur] = i
            cur = self._times_generator(cur)
        exp[q - 1:] = exp[: q - 1]
        exp.setflags(write=False)
        log.setflags(write=False)
        return exp, log

    def _times_generator(self, a: int) -> int:
        p, k = self.p, self.k
        if k == 1:
            return a * self.primitive % p
        top_w = p ** (k - 1)
        top, rest = divmod(a, top_w)
        shifted = rest * p
        if top == 0:
            return shifted
        low = self.modulus[:k]
        if p == 2:
            return shifted ^ sum(c << j for j, c in enumerate(low))
        out, pw = 0, 1
        for j in range(k):
            d = (shifted // pw) % p
            out += ((d - top * low[j]) % p) * pw
            pw *= p
        return out

    @property
    def exp(self) -> np.ndarray:
        return self._tables[0]

    @property
    def log(self) -> np.ndarray:
        return self._tables[1]

    # element arithmetic; accepts ints or integer arrays

    def add(self, a, b):
        return _scalar(_vadd(a, b, self.p, self.k), a, b)

    def neg(self, a):
        return _scalar(_vneg(a, self.p, self.k), a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        exp, log = self._tables
        return _scalar(_vmul(a, b, exp, log), a, b)

    def inv(self, a):
        arr = np.asarray(a, dtype=np.int64)
        if (arr == 0).any():
            raise ZeroInverse("zero has no multiplicative inverse")
        exp, log = self._tables
        q1 = self.q - 1
        return _scalar(exp[(q1 - log[arr]) % q1], a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def kernel_args(self):
        """Field parameters in the order the kernels expect them."""
        exp, log = self._tables
        return self.p, self.k, self.q, exp, log


def _scalar(result, *inputs):
    if all(isinstance(x, (int, np.integer)) for x in inputs):
        return int(result)
    return result


def fe_add(a, b, f: FieldSpec):
    return f.add(a, b)


def fe_sub(a, b, f: FieldSpec):
    return f.sub(a, b)


def fe_neg(a, f: FieldSpec):
    return f.neg(a)


def fe_mul(a, b, f: FieldSpec):
    return f.mul(a, b)


def fe_inv(a, f: FieldSpec):
    return f.inv(a)


class FqMatrix:
    """Immutable dense matrix over a finite field."""

    __slots__ = ("field", "_a")

    def __init__(self, entries, field: FieldSpec, shape: tuple[int, int] | None = None):
        a = np.array(entries, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        if a.ndim != 2:
            raise DimensionMismatch(f"matrix entries must be 2-dimensional, got shape {a.shape}")
        if a.size and (a.min() < 0 or a.max() >= field.q):
            raise FieldError(f"matrix entries must lie in [0, {field.q})")
        a = np.ascontiguousarray(a)
        a.setflags(write=False)
        self._a = a
        self.field = field

    @classmethod
    def _wrap(cls, a: np.ndarray, field: FieldSpec) -> "FqMatrix":
        m = cls.__new__(cls)
        a = np.ascontiguousarray(a, dtype=np.int64)
        a.setflags(write=False)
        m._a = a
        m.field = field
        return m

    @classmethod
    def identity(cls, n: int, field: FieldSpec) -> "FqMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64), field)

    @classmethod
    def zeros(cls, rows: int, cols: int, field: FieldSpec) -> "FqMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), field)

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix._wrap(self._a.T, self.field)

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def take_rows(self, idx) -> "FqMatrix":
        idx = np.asarray(list(idx), dtype=np.int64)
        return FqMatrix._wrap(self._a[idx].reshape(len(idx), self.cols), self.field)

    def vstack(self, other: "FqMatrix") -> "FqMatrix":
        _same_field(self, other)
        if self.cols != other.cols:
            raise DimensionMismatch(f"column counts differ: {self.cols} vs {other.cols}")
        return FqMatrix._wrap(np.vstack([self._a, other._a]), self.field)

    def hstack(self, other: "FqMatrix") -> "FqMatrix":
        _same_field(self, other)
        if self.rows != other.rows:
            raise DimensionMismatch(f"row counts differ: {self.rows} vs {other.rows}")
        return FqMatrix._wrap(np.hstack([self._a, other._a]), self.field)

    def __matmul__(self, other: "FqMatrix") -> "FqMatrix":
        _same_field(self, other)
        if self.cols != other.rows:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {other.shape}")
        return FqMatrix._wrap(matmul_arrays(self._a, other._a, self.field), self.field)

    def __eq__(self, other):
        if not isinstance(other, FqMatrix):
            return NotImplemented
        return (
            self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self._a, other._a))
        )

    __hash__ = None

    def __repr__(self):
        return f"FqMatrix({self.tolist()!r}, {self.field})"

    def rank(self) -> int:
        return mat_rank(self)

    def to_text(self) -> str:
        return matrix_to_text(self)


def _same_field(a: FqMatrix, b: FqMatrix):
    if a.field != b.field:
        raise FieldError(f"field mismatch: {a.field} vs {b.field}")


def matmul_arrays(a: np.ndarray, b: np.ndarray, field: FieldSpec) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=np.int64)
    b = np.ascontiguousarray(b, dtype=np.int64)
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    return kernels.matmul(a, b, *field.kernel_args())


def rref_array(a: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a copy of ``a`` and its pivot columns."""
    work = np.array(a, dtype=np.int64, order="C")
    if work.size == 0:
        return work, []
    pivots = kernels.rref(work, *field.kernel_args())
    return work, list(pivots)


def rref(M: FqMatrix) -> tuple[FqMatrix, list[int]]:
    """Deterministic RREF: leftmost pivot, topmost row, unit pivots, full reduction.

    Zero rows are dropped from the returned matrix.
    """
    R, piv = rref_array(M.array, M.field)
    return FqMatrix._wrap(R[: len(piv)], M.field), piv


def mat_rank(M: FqMatrix) -> int:
    return len(rref_array(M.array, M.field)[1])


def rowspan_contains(M: FqMatrix, v) -> bool:
    v = np.asarray(v, dtype=np.int64).reshape(-1)
    if v.shape[0] != M.cols:
        raise DimensionMismatch(f"vector length {v.shape[0]} does not match {M.cols} columns")
    stacked = np.vstack([M.array, v[None, :]])
    return len(rref_array(stacked, M.field)[1]) == mat_rank(M)


def _null_space_array(a: np.ndarray, field: FieldSpec) -> np.ndarray:
    """RREF basis of {x : a x^T = 0}."""
    cols = a.shape[1]
    R, piv = rref_array(a, field)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for r, fc in enumerate(free):
        basis[r, fc] = 1
        for i, pc in enumerate(piv):
            basis[r, pc] = field.neg(int(R[i, fc]))
    if len(free) == 0:
        return basis
    B, bp = rref_array(basis, field)
    return B[: len(bp)]


def left_null_space(M: FqMatrix) -> FqMatrix:
    """Basis rows, in RREF, of {z : zM = 0}."""
    return FqMatrix._wrap(_null_space_array(M.array.T, M.field), M.field)


def null_space(M: FqMatrix) -> FqMatrix:
    """Basis rows, in RREF, of {x : M x^T = 0}."""
    return FqMatrix._wrap(_null_space_array(M.array, M.field), M.field)


def parity_check_of_rowspace(G: FqMatrix) -> FqMatrix:
    """H whose rowspace is the orthogonal complement of rowspan(G)."""
    if mat_rank(G) < G.rows:
        raise DependentRows(f"generator rows are dependent (rank {mat_rank(G)} < {G.rows})")
    return null_space(G)


# vector codes: base-q integers, first coordinate most significant


def vectors_to_codes(vecs: np.ndarray, q: int) -> np.ndarray:
    vecs = np.asarray(vecs, dtype=np.int64)
    n = vecs.shape[-1]
    w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return vecs @ w


def codes_to_vectors(codes, q: int, n: int) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    w = q ** np.arange(n - 1, -1, -1, dtype=np.int64)
    return (codes[..., None] // w) % q


# text format


def _field_from_header(tokens: list[str], line: int) -> tuple[int, int, FieldSpec]:
    try:
        nums = [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"header must be integers, got {' '.join(tokens)!r}", line) from None
    if len(nums) == 3:
        rows, cols, q = nums
        try:
            field = FieldSpec.of(q)
        except FieldError as e:
            raise ParseError(str(e), line) from None
    elif len(nums) == 4:
        rows, cols, p, k = nums
        try:
            field = FieldSpec(p, k)
        except FieldError as e:
            raise ParseError(str(e), line) from None
    else:
        raise ParseError("header must be 'rows cols q' or 'rows cols p k'", line)
    if rows < 0 or cols < 0:
        raise ParseError("negative matrix dimension", line)
    return rows, cols, field


def matrix_from_text(text: str) -> FqMatrix:
    lines = [
        (no, raw.split("#", 1)[0].split())
        for no, raw in enumerate(text.splitlines(), start=1)
    ]
    lines = [(no, toks) for no, toks in lines if toks]
    if not lines:
        raise ParseError("empty matrix file", 1)
    rows, cols, field = _field_from_header(lines[0][1], lines[0][0])
    body = lines[1:]
    if cols == 0:
        body_rows = []
        if body:
            raise ParseError("zero-column matrix must not have row lines", body[0][0])
    else:
        if len(body) != rows:
            where = body[rows][0] if len(body) > rows else (body[-1][0] + 1 if body else lines[0][0] + 1)
            raise ParseError(f"expected {rows} rows, found {len(body)}", where)
        body_rows = []
        for no, toks in body:
            if len(toks) != cols:
                raise ParseError(f"expected {cols} entries, found {len(toks)}", no)
            try:
                vals = [int(t) for t in toks]
            except ValueError:
                raise ParseError("entries must be integers", no) from None
            bad = [v for v in vals if not 0 <= v < field.q]
            if bad:
                raise ParseError(f"entry {bad[0]} outside [0, {field.q})", no)
            body_rows.append(vals)
    return FqMatrix(np.array(body_rows, dtype=np.int64).reshape(rows, cols), field)


def matrix_to_text(M: FqMatrix) -> str:
    f = M.field
    head = f"{M.rows} {M.cols} {f.q}" if f.k == 1 else f"{M.rows} {M.cols} {f.p} {f.k}"
    out = [head]
    if M.cols:
        out.extend(" ".join(str(x) for x in row) for row in M.tolist())
    return "\n".join(out) + "\n"
