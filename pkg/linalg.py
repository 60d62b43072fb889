"""
Exact Gaussian elimination over a field.

Entries are any exact field values supporting +, -, *, / and is_zero
(FieldElem in practice). Matrices are lists of rows and are modified in place
by row_echelon.
"""
import logging
from typing import List, Optional, Sequence

logger = logging.getLogger(__name__)

Matrix = List[List]


def _is_zero(value) -> bool:
    return value.is_zero


def row_echelon(m: Matrix, t: Optional[List] = None) -> List[int]:
    """
    Reduce m (and the right-hand side t, when given) to row echelon form.

    Args:
        m: Matrix rows, modified in place
        t: Optional right-hand side, modified in place

    Returns:
        Indices of the free (non-pivot) columns
    """
    free_vars: List[int] = []
    n_rows = len(m)
    if n_rows == 0:
        return free_vars
    n_cols = len(m[0])
    piv_r = 0
    for piv_c in range(n_cols):
        if piv_r >= n_rows:
            free_vars.extend(range(piv_c, n_cols))
            break
        for i_row in range(piv_r, n_rows):
            if not _is_zero(m[i_row][piv_c]):
                break
        else:
            free_vars.append(piv_c)
            continue
        if i_row != piv_r:
            m[piv_r], m[i_row] = m[i_row], m[piv_r]
            if t is not None:
                t[piv_r], t[i_row] = t[i_row], t[piv_r]
        fp = m[piv_r][piv_c]
        for r in range(piv_r + 1, n_rows):
            fr = m[r][piv_c]
            if _is_zero(fr):
                continue
            frp = fr / fp
            for c in range(piv_c, n_cols):
                if not _is_zero(m[piv_r][c]):
                    m[r][c] = m[r][c] - m[piv_r][c] * frp
            if t is not None:
                t[r] = t[r] - t[piv_r] * frp
        piv_r += 1
    return free_vars


def back_substitution(m: Matrix, t: Optional[List], free_vars: Sequence[int], sol: List) -> Optional[List]:
    """
    Solve an echelon system, with free variables fixed to the values in sol.

    Returns:
        sol with pivot variables filled in, or None when inconsistent
    """
    n_rows = len(m)
    n_cols = len(m[0]) if n_rows else len(sol)
    rank = n_cols - len(free_vars)
    if t is not None:
        for r in range(rank, n_rows):
            if not _is_zero(t[r]):
                return None
    free = set(free_vars)
    piv_cols = [c for c in range(n_cols) if c not in free]
    for r in range(len(piv_cols) - 1, -1, -1):
        piv_c = piv_cols[r]
        s = -t[r] if t is not None else None
        for c in range(piv_c + 1, n_cols):
            if _is_zero(m[r][c]) or _is_zero(sol[c]):
                continue
            term = m[r][c] * sol[c]
            s = term if s is None else s + term
        if s is None:
            sol[piv_c] = m[r][piv_c] * 0
        else:
            sol[piv_c] = -s / m[r][piv_c]
    return sol


def solve(matrix: Sequence[Sequence], rhs: Sequence, zero) -> Optional[List]:
    """
    One solution x of matrix * x = rhs, free variables set to zero.

    Args:
        matrix: Coefficient rows (copied)
        rhs: Right-hand side (copied)
        zero: The field zero

    Returns:
        The solution, or None when the system is inconsistent
    """
    m = [list(row) for row in matrix]
    t = list(rhs)
    if not m:
        return []
    free_vars = row_echelon(m, t)
    sol = [zero] * len(m[0])
    return back_substitution(m, t, free_vars, sol)


def rank(matrix: Sequence[Sequence]) -> int:
    m = [list(row) for row in matrix]
    if not m:
        return 0
    return len(m[0]) - len(row_echelon(m))


def nullspace(matrix: Sequence[Sequence], n_cols: int, zero, one) -> List[List]:
    """
    A basis of {x : matrix * x = 0}.

    Args:
        matrix: Coefficient rows (copied); may be empty
        n_cols: Number of unknowns
        zero: The field zero
        one: The field one

    Returns:
        One basis vector per free column
    """
    m = [list(row) for row in matrix]
    if not m:
        return [[one if i == j else zero for i in range(n_cols)] for j in range(n_cols)]
    free_vars = row_echelon(m)
    basis = []
    for free in free_vars:
        sol = [zero] * n_cols
        sol[free] = one
        basis.append(back_substitution(m, None, free_vars, sol))
    logger.debug(f"Nullspace of a {len(m)}x{n_cols} system has dimension {len(basis)}")
    return basis
