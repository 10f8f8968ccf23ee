"""Exact linear algebra over Z and Z/m: Smith form, kernels, solving, quotients.

Everything here is integer-exact.  Matrices are numpy arrays; computations run
in int64 while entries stay comfortably below the overflow guard and are
transparently escalated to arbitrary-precision Python integers (dtype=object)
otherwise, so no result ever depends on wraparound.

Vectors are columns: the kernel of an r x c matrix is a c x k matrix whose
columns form a lattice basis, and the column span of a matrix is its image.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

# Above this magnitude an int64 multiply-subtract step could overflow, so the
# computation switches to Python integers.
_GUARD = 1 << 30

_CHECK_SNF = os.environ.get("QHOM_CHECK_SNF", "") not in ("", "0")


def as_matrix(rows) -> np.ndarray:
    """Build an integer matrix (2-d numpy array) from nested sequences."""
    a = np.array(rows, dtype=object)
    if a.ndim != 2:
        a = a.reshape(len(rows), -1)
    try:
        return a.astype(np.int64)
    except (OverflowError, TypeError):
        return a


def zeros(r: int, c: int) -> np.ndarray:
    return np.zeros((r, c), dtype=np.int64)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def _needs_escalation(*mats: np.ndarray) -> bool:
    for m in mats:
        if m.dtype == object:
            return False  # already exact
        if m.size and np.abs(m).max() >= _GUARD:
            return True
    return False


def _to_object(m: np.ndarray) -> np.ndarray:
    return m.astype(object) if m.dtype != object else m


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return _to_object(a) @ _to_object(b)


# ---------------------------------------------------------------------------
# Smith normal form
# ---------------------------------------------------------------------------

def smith_normal_form(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (U, D, V) with U m V = D diagonal, d1 | d2 | ..., U, V unimodular.

    Pivots are chosen by minimal absolute value, which keeps intermediate
    entries small on the incidence-style matrices this package produces.  When
    QHOM_CHECK_SNF is set the factorization is re-verified by multiplication
    (exactly for small matrices, via multi-prime modular multiplication for
    large ones).
    """
    a = np.array(as_matrix(m), copy=True)
    r, c = a.shape
    u = identity(r).astype(a.dtype)
    v = identity(c).astype(a.dtype)
    t = 0
    while t < min(r, c):
        if _needs_escalation(a, u, v):
            a, u, v = _to_object(a), _to_object(u), _to_object(v)
        sub = a[t:, t:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        # minimal |entry| pivot
        pi, pj = min((tuple(ij) for ij in nz), key=lambda ij: abs(int(sub[ij[0], ij[1]])))
        pi, pj = pi + t, pj + t
        if pi != t:
            a[[t, pi]] = a[[pi, t]]
            u[[t, pi]] = u[[pi, t]]
        if pj != t:
            a[:, [t, pj]] = a[:, [pj, t]]
            v[:, [t, pj]] = v[:, [pj, t]]
        while True:
            if _needs_escalation(a, u, v):
                a, u, v = _to_object(a), _to_object(u), _to_object(v)
            piv = a[t, t]
            col = a[t + 1 :, t]
            if np.any(col != 0):
                q = col // piv
                a[t + 1 :] -= q[:, None] * a[t]
                u[t + 1 :] -= q[:, None] * u[t]
                rem = a[t + 1 :, t]
                if np.any(rem != 0):
                    # remainder smaller than pivot: swap it up and keep reducing
                    k = int(np.argmax(rem != 0)) + t + 1
                    a[[t, k]] = a[[k, t]]
                    u[[t, k]] = u[[k, t]]
                continue
            row = a[t, t + 1 :]
            if np.any(row != 0):
                q = row // piv
                a[:, t + 1 :] -= a[:, t : t + 1] * q[None, :]
                v[:, t + 1 :] -= v[:, t : t + 1] * q[None, :]
                rem = a[t, t + 1 :]
                if np.any(rem != 0):
                    k = int(np.argmax(rem != 0)) + t + 1
                    a[:, [t, k]] = a[:, [k, t]]
                    v[:, [t, k]] = v[:, [k, t]]
                continue
            # pivot must divide the rest of the submatrix for the chain d1|d2|...
            rest = a[t + 1 :, t + 1 :]
            bad = np.argwhere(rest % piv != 0)
            if bad.size:
                i = int(bad[0][0]) + t + 1
                a[t] += a[i]
                u[t] += u[i]
                continue
            break
        t += 1
    # normalize signs on the diagonal
    for i in range(min(r, c)):
        if a[i, i] < 0:
            a[:, i] = -a[:, i]
            v[:, i] = -v[:, i]
    if _CHECK_SNF:
        _assert_snf(as_matrix(m), u, a, v)
    return u, a, v


def _assert_snf(m: np.ndarray, u: np.ndarray, d: np.ndarray, v: np.ndarray) -> None:
    if max(m.shape) <= 200:
        if not np.array_equal(_exact_matmul(_exact_matmul(u, m), v), _to_object(d)):
            raise AssertionError("SNF postcondition U m V = D failed")
        return
    # modular spot check with independent word-size-safe primes
    for p in (1048573, 999983, 909091):
        um = (_reduce(u, p) @ _reduce(m, p)) % p
        umv = (um @ _reduce(v, p)) % p
        if not np.array_equal(umv, _reduce(d, p)):
            raise AssertionError("SNF postcondition U m V = D failed (mod check)")


def _reduce(m: np.ndarray, p: int) -> np.ndarray:
    if m.dtype == object:
        return np.vectorize(lambda x: int(x) % p, otypes=[np.int64])(m)
    return (m % p).astype(np.int64)


def snf_diagonal(m) -> list[int]:
    """The nonzero invariant factors of m, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    return [int(d[i, i]) for i in range(min(d.shape)) if d[i, i] != 0]


def rank(m) -> int:
    return len(snf_diagonal(m))


# ---------------------------------------------------------------------------
# Kernels, images, solving
# ---------------------------------------------------------------------------

def column_echelon(m) -> tuple[np.ndarray, np.ndarray]:
    """Reduce by unimodular column operations only: returns (E, V) with m V = E.

    The nonzero columns of E are a basis of the column lattice of m and the
    columns of V matching zero columns of E are a basis of the kernel lattice.
    """
    a = np.array(as_matrix(m), copy=True)
    r, c = a.shape
    v = identity(c).astype(a.dtype)
    row = 0
    col = 0
    while row < r and col < c:
        if _needs_escalation(a, v):
            a, v = _to_object(a), _to_object(v)
        seg = a[row, col:]
        nz = np.nonzero(seg != 0)[0]
        if nz.size == 0:
            row += 1
            continue
        while True:
            seg = a[row, col:]
            nz = np.nonzero(seg != 0)[0]
            if nz.size == 0:
                break
            k = min(nz, key=lambda j: abs(int(seg[j]))) + col
            if k != col:
                a[:, [col, k]] = a[:, [k, col]]
                v[:, [col, k]] = v[:, [k, col]]
            piv = a[row, col]
            rest = a[row, col + 1 :]
            if np.any(rest != 0):
                q = rest // piv
                a[:, col + 1 :] -= a[:, col : col + 1] * q[None, :]
                v[:, col + 1 :] -= v[:, col : col + 1] * q[None, :]
                if _needs_escalation(a, v):
                    a, v = _to_object(a), _to_object(v)
                continue
            break
        if a[row, col] != 0:
            if a[row, col] < 0:
                a[:, col] = -a[:, col]
                v[:, col] = -v[:, col]
            col += 1
        row += 1
    return a, v


def kernel_basis(m) -> np.ndarray:
    """Basis (columns) of the integer kernel lattice {x : m x = 0}."""
    a = as_matrix(m)
    e, v = column_echelon(a)
    zero_cols = [j for j in range(a.shape[1]) if not np.any(e[:, j] != 0)]
    return v[:, zero_cols]


def column_lattice_basis(m) -> np.ndarray:
    """Basis (columns) of the lattice spanned by the columns of m."""
    e, _ = column_echelon(m)
    keep = [j for j in range(e.shape[1]) if np.any(e[:, j] != 0)]
    return e[:, keep]


def solve_many(m, rhs) -> list[np.ndarray | None]:
    """Solve m x = b over Z for each column b of rhs; None where unsolvable."""
    a = as_matrix(m)
    b = as_matrix(rhs)
    u, d, v = smith_normal_form(a)
    r, c = a.shape
    diag = [int(d[i, i]) for i in range(min(r, c))]
    rk = sum(1 for x in diag if x != 0)
    ub = _exact_matmul(u, b)
    out: list[np.ndarray | None] = []
    for j in range(b.shape[1]):
        cvec = ub[:, j]
        y = [0] * c
        good = True
        for i in range(r):
            ci = int(cvec[i])
            if i < rk:
                if ci % diag[i]:
                    good = False
                    break
                y[i] = ci // diag[i]
            elif ci != 0:
                good = False
                break
        if not good:
            out.append(None)
            continue
        x = _exact_matmul(v, np.array(y, dtype=object).reshape(-1, 1))[:, 0]
        out.append(x)
    return out


def solve(m, b) -> np.ndarray | None:
    """Some integer solution of m x = b, or None."""
    bb = as_matrix([[int(x)] for x in np.asarray(b).ravel()])
    return solve_many(m, bb)[0]


def solve_mod(m, b, modulus: int) -> np.ndarray | None:
    """Some x with m x = b (mod modulus); modulus 0 means over Z.

    Complete: solves the lifted system [m | modulus * I] over Z, so a solution
    is found whenever one exists for any modulus.
    """
    if modulus < 0:
        raise ValueError("modulus must be >= 0")
    a = as_matrix(m)
    if modulus == 0:
        return solve(a, b)
    aug = np.concatenate([a, modulus * identity(a.shape[0])], axis=1)
    x = solve(aug, b)
    if x is None:
        return None
    return np.array([int(t) % modulus for t in x[: a.shape[1]]], dtype=np.int64)


def kernel_mod(m, modulus: int) -> np.ndarray:
    """Basis of {x : m x = 0 (mod modulus)} as a lattice in Z^cols.

    For modulus > 0 the lattice contains modulus * Z^cols, so the quotient by
    any image sublattice is finite.
    """
    a = as_matrix(m)
    if modulus == 0:
        return kernel_basis(a)
    aug = np.concatenate([a, modulus * identity(a.shape[0])], axis=1)
    gens = kernel_basis(aug)[: a.shape[1], :]
    stack = np.concatenate([gens, modulus * identity(a.shape[1])], axis=1)
    return column_lattice_basis(stack)


# ---------------------------------------------------------------------------
# Abelian group types and lattice quotients
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AbelianGroup:
    """A finitely generated abelian group in invariant-factor form.

    ``torsion`` is the divisibility chain d1 | d2 | ... with every di >= 2.
    """

    free_rank: int
    torsion: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"not a divisibility chain: {self.torsion}")
        if any(d < 2 for d in self.torsion):
            raise ValueError("torsion factors must be >= 2")

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if self.free_rank:
            return None
        n = 1
        for d in self.torsion:
            n *= d
        return n

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts: list[str] = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        i = 0
        while i < len(self.torsion):
            j = i
            while j < len(self.torsion) and self.torsion[j] == self.torsion[i]:
                j += 1
            d, mult = self.torsion[i], j - i
            parts.append(f"Z{d}" if mult == 1 else f"Z{d}^{mult}")
            i = j
        return " ⊕ ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def quotient_group(ker_basis, im_basis) -> AbelianGroup:
    """Invariant factors of (lattice spanned by ker_basis) / (image lattice).

    ker_basis columns must be linearly independent and the image columns must
    lie in the kernel lattice (for boundary data of an actual chain complex
    they always do); violations raise ValueError.
    """
    k = as_matrix(ker_basis)
    im = as_matrix(im_basis)
    nker = k.shape[1]
    if nker == 0:
        if im.shape[1] and np.any(im != 0):
            raise ValueError("image not contained in the (zero) kernel lattice")
        return AbelianGroup(0)
    if rank(k) != nker:
        raise ValueError("kernel basis columns are not independent")
    if im.shape[1] == 0 or not np.any(im != 0):
        return AbelianGroup(nker)
    sols = solve_many(k, im)
    if any(s is None for s in sols):
        raise ValueError(
            "image columns do not lie in the kernel lattice "
            "(input is not consecutive boundary data of a chain complex)"
        )
    y = np.stack(sols, axis=1)
    factors = snf_diagonal(y)
    free = nker - len(factors)
    torsion = tuple(int(d) for d in factors if abs(int(d)) > 1)
    return AbelianGroup(free, torsion)


# ---------------------------------------------------------------------------
# Arithmetic mod a prime (fast exact path for Z_p coefficients)
# ---------------------------------------------------------------------------

def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def gf_echelon(m, p: int) -> tuple[np.ndarray, list[int]]:
    """Row-reduce a copy of m over GF(p); returns (rref, pivot column list)."""
    a = (as_matrix(m) % p).astype(np.int64)
    rows, cols = a.shape
    pivots: list[int] = []
    rp = 0
    for col in range(cols):
        if rp == rows:
            break
        nz = np.nonzero(a[rp:, col])[0]
        if nz.size == 0:
            continue
        k = int(nz[0]) + rp
        if k != rp:
            a[[rp, k]] = a[[k, rp]]
        inv = pow(int(a[rp, col]), p - 2, p)
        a[rp] = (a[rp] * inv) % p
        other = np.nonzero(a[:, col])[0]
        other = other[other != rp]
        if other.size:
            a[other] = (a[other] - np.outer(a[other, col], a[rp])) % p
        pivots.append(col)
        rp += 1
    return a, pivots


def gf_rank(m, p: int) -> int:
    return len(gf_echelon(m, p)[1])


def gf_solve_affine(m, rhs, p: int) -> tuple[np.ndarray, np.ndarray] | None:
    """Solve m x = rhs (mod p prime): returns (particular, nullspace basis).

    The nullspace basis columns span all homogeneous solutions, so the full
    solution set is particular + spans.  Returns None when inconsistent.
    """
    a = as_matrix(m)
    b = (as_matrix(rhs) % p).astype(np.int64)
    if b.ndim == 1:
        b = b.reshape(-1, 1)
    cols = a.shape[1]
    red, pivots = gf_echelon(np.concatenate([a % p, b], axis=1), p)
    if any(c >= cols for c in pivots):
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, cols]
    free = [c for c in range(cols) if c not in set(pivots)]
    null = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        null[fc, j] = 1
        for i, c in enumerate(pivots):
            null[c, j] = (-red[i, fc]) % p
    return x, null
