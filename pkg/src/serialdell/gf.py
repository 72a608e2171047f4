"""Dense linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced into [0, p).  The default
prime is 15 bits so that products of reduced entries stay far below 2**63 even
after summing tens of thousands of terms.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 32749


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mod(a: np.ndarray, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.shape[0] == 0 or b.shape[1] == 0 or a.shape[1] == 0:
        return zeros(a.shape[0], b.shape[1])
    return (a @ b) % p


def inv_scalar(x: int, p: int) -> int:
    return pow(int(x) % p, p - 2, p)


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot column indices."""
    r = mod(a.copy(), p)
    rows, cols = r.shape
    pivots: list[int] = []
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_scalar(r[row, col], p)) % p
        for i in range(rows):
            if i != row and r[i, col]:
                r[i] = (r[i] - r[i, col] * r[row]) % p
        pivots.append(col)
        row += 1
    return r[: len(pivots)], pivots


def rank(a: np.ndarray, p: int) -> int:
    return len(rref(a, p)[1])


def row_basis(a: np.ndarray, p: int) -> np.ndarray:
    """A basis of the row space, in RREF form."""
    return rref(a, p)[0]


def left_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Rows x with x @ a == 0; returned stacked as a (k, rows(a)) matrix."""
    rows = a.shape[0]
    # Row-reduce [a | I]; the identity block tracks the row operations, so the
    # rows whose a-part vanished span the left nullspace.
    aug = np.hstack([mod(a, p), eye(rows)])
    r = mod(aug, p)
    cols = a.shape[1]
    row = 0
    for col in range(cols):
        if row >= rows:
            break
        nz = np.nonzero(r[row:, col])[0]
        if nz.size == 0:
            continue
        piv = row + int(nz[0])
        if piv != row:
            r[[row, piv]] = r[[piv, row]]
        r[row] = (r[row] * inv_scalar(r[row, col], p)) % p
        for i in range(rows):
            if i != row and r[i, col]:
                r[i] = (r[i] - r[i, col] * r[row]) % p
        row += 1
    return r[row:, cols:]


def right_nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Rows x with a @ x^T == 0, i.e. solutions of a x = 0 stacked as rows."""
    return left_nullspace(a.T, p)


def solve_left(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Solve x @ a = b row by row; None if any row of b is outside row(a)."""
    rows_a = a.shape[0]
    aug = np.hstack([mod(a, p), eye(rows_a)])
    r, pivots = rref(aug, p)
    cols = a.shape[1]
    out = zeros(b.shape[0], rows_a)
    bb = mod(b, p)
    for i in range(b.shape[0]):
        rem = bb[i].copy()
        coeff = zeros(1, rows_a)[0]
        for j, col in enumerate(pivots):
            if col >= cols:
                break
            if rem[col]:
                c = rem[col]
                rem = (rem - c * r[j, :cols]) % p
                coeff = (coeff + c * r[j, cols:]) % p
        if np.any(rem):
            return None
        out[i] = coeff
    return out


def inverse(a: np.ndarray, p: int) -> np.ndarray | None:
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ValueError("not square")
    sol = solve_left(a, eye(n), p)
    return sol


def complete_basis(rows: np.ndarray, n: int, p: int) -> np.ndarray:
    """Standard basis vectors extending row(rows) to all of F_p^n."""
    r, pivots = rref(rows, p) if rows.size else (zeros(0, n), [])
    if rows.shape[0] and rows.shape[1] != n:
        raise ValueError("width mismatch")
    free = [c for c in range(n) if c not in set(pivots)]
    out = zeros(len(free), n)
    for i, c in enumerate(free):
        out[i, c] = 1
    return out


def stack(mats: list[np.ndarray], width: int) -> np.ndarray:
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return zeros(0, width)
    return np.vstack(mats)


def in_row_space(rows: np.ndarray, vec: np.ndarray, p: int) -> bool:
    return solve_left(rows, vec.reshape(1, -1), p) is not None


def char_poly(a: np.ndarray, p: int) -> list[int]:
    """Coefficients [c_0, ..., c_n] of det(xI - a), c_n = 1.

    Faddeev-LeVerrier when p > n (the divisions by 1..n stay invertible),
    otherwise the division-free Berkowitz route.
    """
    n = a.shape[0]
    if n >= p:
        return _char_poly_berkowitz(a, p)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = eye(n)
    c = 1
    for k in range(1, n + 1):
        am = matmul(a, m, p)
        c = (-inv_scalar(k, p) * int(np.trace(am) % p)) % p
        coeffs[n - k] = c
        m = (am + c * eye(n)) % p
    return coeffs


def _char_poly_berkowitz(a: np.ndarray, p: int) -> list[int]:
    n = a.shape[0]
    # poly holds det(xI - A_k) low degree first, built up one leading row at a time
    poly = np.array([1], dtype=np.int64)
    for k in range(1, n + 1):
        sub = a[n - k :, n - k :]
        alpha = int(sub[0, 0])
        row = sub[0:1, 1:]
        col = sub[1:, 0:1]
        body = sub[1:, 1:]
        # Toeplitz column: [1, -alpha, -row*col, -row*body*col, ...]
        t = [1, (-alpha) % p]
        acc = col
        for _ in range(k - 1):
            t.append((-int(matmul(row, acc, p)[0, 0])) % p)
            acc = matmul(body, acc, p)
        new = np.zeros(k + 1, dtype=np.int64)
        for i, c in enumerate(t):
            if c:
                end = min(i + poly.shape[0], k + 1)
                new[i:end] = (new[i:end] + c * poly[: end - i]) % p
        poly = new
    return [int(poly[n - i]) for i in range(n + 1)]
