"""Sparse matrices over GF(p) and the linear operators the protocols act on.

A SparseMatrix stores coordinate triplets plus a per-row adjacency used by
apply/rapply.  Operators expose n, p, mu (the field-operation cost of one
application), apply (A v), rapply (u^T A) and .T; TransposeOp and
DiagScaledOp wrap a base operator without materialising anything.

matvec, vecmat and dot are the only entry points protocol code uses, and
they charge the active cost ledger: an operator application costs op.mu and
bumps the corresponding counter, a dot of length n costs 2n - 1.
"""

import hashlib
import random
from operator import mul

from . import engine


class ParseError(Exception):
    """Matrix file rejected; the message carries the offending line number."""


class SparseMatrix:
    """Square sparse matrix over GF(p) in merged, sorted triplet form."""

    def __init__(self, n, p, triplets):
        if n < 1:
            raise ValueError("dimension must be positive")
        self.n = n
        self.p = p
        merged = {}
        for r, c, v in triplets:
            if not (0 <= r < n and 0 <= c < n):
                raise ValueError("entry (%d, %d) outside matrix" % (r, c))
            key = (r, c)
            merged[key] = (merged.get(key, 0) + v) % p
        self.triplets = tuple(
            (r, c, v) for (r, c), v in sorted(merged.items()) if v != 0
        )
        by_row = [([], []) for _ in range(n)]
        for r, c, v in self.triplets:
            by_row[r][0].append(c)
            by_row[r][1].append(v)
        self._by_row = [(tuple(cs), tuple(vs)) for cs, vs in by_row]
        self._by_col = None
        self.nnz = len(self.triplets)
        nonempty = sum(1 for cs, _ in self._by_row if cs)
        self.mu = 2 * self.nnz - nonempty

    def _columns(self):
        if self._by_col is None:
            by_col = [([], []) for _ in range(self.n)]
            for r, c, v in self.triplets:
                by_col[c][0].append(r)
                by_col[c][1].append(v)
            self._by_col = [(tuple(rs), tuple(vs)) for rs, vs in by_col]
        return self._by_col

    def apply(self, v):
        """A v, one reduction per row."""
        p = self.p
        g = v.__getitem__
        return [sum(map(mul, vs, map(g, cs))) % p for cs, vs in self._by_row]

    def rapply(self, u):
        """u^T A, one reduction per column."""
        p = self.p
        g = u.__getitem__
        return [sum(map(mul, vs, map(g, rs))) % p for rs, vs in self._columns()]

    @property
    def T(self):
        return TransposeOp(self)

    @property
    def digest(self):
        h = hashlib.sha256(b"KMX1")
        h.update(self.n.to_bytes(8, "little"))
        h.update(self.p.to_bytes(8, "little"))
        h.update(self.nnz.to_bytes(8, "little"))
        for r, c, v in self.triplets:
            h.update(r.to_bytes(8, "little"))
            h.update(c.to_bytes(8, "little"))
            h.update(v.to_bytes(8, "little"))
        return h.digest()


class TransposeOp:
    """View of A^T over a base operator; application cost is unchanged."""

    def __init__(self, base):
        self.base = base
        self.n = base.n
        self.p = base.p
        self.mu = base.mu

    def apply(self, v):
        return self.base.rapply(v)

    def rapply(self, u):
        return self.base.apply(u)

    @property
    def T(self):
        return self.base


class DiagScaledOp:
    """diag(d) * A (side "left") or A * diag(d) (side "right"), unmaterialised.

    One application costs mu(A) + n: the base application plus n scalings.
    """

    def __init__(self, d, base, side="left"):
        if side not in ("left", "right"):
            raise ValueError("side must be left or right")
        if len(d) != base.n:
            raise ValueError("diagonal length does not match the operator")
        self.d = list(d)
        self.base = base
        self.side = side
        self.n = base.n
        self.p = base.p
        self.mu = base.mu + base.n

    def apply(self, v):
        p = self.p
        if self.side == "left":
            w = self.base.apply(v)
            return [di * wi % p for di, wi in zip(self.d, w)]
        return self.base.apply([di * vi % p for di, vi in zip(self.d, v)])

    def rapply(self, u):
        p = self.p
        if self.side == "left":
            return self.base.rapply([di * ui % p for di, ui in zip(self.d, u)])
        w = self.base.rapply(u)
        return [di * wi % p for di, wi in zip(self.d, w)]

    @property
    def T(self):
        flip = "right" if self.side == "left" else "left"
        return DiagScaledOp(self.d, self.base.T, flip)


def matvec(op, v):
    """A v, charged to the active ledger as one matvec of op.mu field ops."""
    engine.charge_matvec(op.mu)
    return op.apply(v)


def vecmat(u, op):
    """u^T A, charged as one vector-matrix product of op.mu field ops."""
    engine.charge_vecmat(op.mu)
    return op.rapply(u)


def dot(u, v, p):
    """Inner product, 2n - 1 field ops."""
    if len(u) != len(v):
        raise ValueError("dot of mismatched lengths")
    engine.charge_field_ops(2 * len(u) - 1)
    return sum(map(mul, u, v)) % p


def scaled_accumulate(acc, c, v, p):
    """acc += c * v elementwise, 2n field ops."""
    engine.charge_field_ops(2 * len(v))
    return [(a + c * b) % p for a, b in zip(acc, v)]


def combine(coeffs, values, p):
    """sum coeffs[i] * values[i] over scalars, 2k - 1 field ops."""
    engine.charge_field_ops(2 * len(coeffs) - 1)
    return sum(map(mul, coeffs, values)) % p


def random_sparse(n, nnz_per_row, seed, p):
    """Matrix with exactly nnz_per_row nonzero entries in each row."""
    if nnz_per_row > n:
        raise ValueError("cannot place %d distinct columns in a row of %d"
                         % (nnz_per_row, n))
    rng = random.Random(seed)
    triplets = []
    for r in range(n):
        for c in sorted(rng.sample(range(n), nnz_per_row)):
            triplets.append((r, c, rng.randrange(1, p)))
    return SparseMatrix(n, p, triplets)


_MM_HEADER = "%%matrixmarket matrix coordinate integer general"


def write_matrix(mat, path):
    with open(path, "w") as fh:
        fh.write("%%MatrixMarket matrix coordinate integer general\n")
        fh.write("% modulus {}\n".format(mat.p))
        fh.write("{} {} {}\n".format(mat.n, mat.n, mat.nnz))
        for r, c, v in mat.triplets:
            fh.write("{} {} {}\n".format(r + 1, c + 1, v))


def parse_matrix(text):
    lines = text.splitlines()
    if not lines or " ".join(lines[0].split()).lower() != _MM_HEADER:
        raise ParseError("line 1: expected MatrixMarket coordinate integer header")
    p = None
    ln = 1
    while ln < len(lines) and lines[ln].lstrip().startswith("%"):
        parts = lines[ln].lstrip("%").split()
        if len(parts) == 2 and parts[0] == "modulus":
            try:
                p = int(parts[1])
            except ValueError:
                raise ParseError("line %d: bad modulus" % (ln + 1))
        ln += 1
    if p is None:
        raise ParseError("missing '% modulus <p>' comment line")
    if ln >= len(lines):
        raise ParseError("line %d: missing size line" % (ln + 1))
    sizes = lines[ln].split()
    if len(sizes) != 3:
        raise ParseError("line %d: size line needs rows cols nnz" % (ln + 1))
    try:
        rows, cols, nnz = (int(x) for x in sizes)
    except ValueError:
        raise ParseError("line %d: size line needs integers" % (ln + 1))
    if rows != cols:
        raise ParseError("line %d: matrix must be square" % (ln + 1))
    if rows < 1:
        raise ParseError("line %d: dimension must be positive" % (ln + 1))
    ln += 1
    triplets = []
    seen = 0
    while ln < len(lines):
        line = lines[ln].strip()
        ln += 1
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ParseError("line %d: entry needs row col value" % ln)
        try:
            r, c, v = (int(x) for x in parts)
        except ValueError:
            raise ParseError("line %d: entry needs integers" % ln)
        if not (1 <= r <= rows and 1 <= c <= rows):
            raise ParseError("line %d: index out of range" % ln)
        if not (0 <= v < p):
            raise ParseError("line %d: value not reduced mod %d" % (ln, p))
        if v == 0:
            raise ParseError("line %d: explicit zero entry" % ln)
        triplets.append((r - 1, c - 1, v))
        seen += 1
    if seen != nnz:
        raise ParseError("entry count %d does not match declared %d" % (seen, nnz))
    return SparseMatrix(rows, p, triplets)


def read_matrix(path):
    with open(path) as fh:
        return parse_matrix(fh.read())
