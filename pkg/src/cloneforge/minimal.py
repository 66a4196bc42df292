"""Minimal clones: type classification of minors-trivial operations,
minimality decisions, the k <= 3 census, conservative criteria, Taylor
witnesses, and essential minimality of type A."""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .closure import DEFAULT_CAP, Verdict, clone_part, generates
from .core import (
    Operation,
    analyze,
    canonical_key,
    conjugate,
    essential_vars,
    index_to_tuple,
    is_projection,
    minor,
    tuple_to_index,
)
from .errors import (
    ArityMismatch,
    BadParams,
    DomainTooLarge,
    IdempotentInput,
    Inconclusive,
    NotConservative,
    NotMinority,
    NotMinorsTrivial,
    PreconditionFailed,
    SwierczkowskiViolation,
    WrongShape,
    WrongType,
)


@dataclass(frozen=True)
class MinimalType:
    tag: str  # unary | binary_idempotent | majority | minority |
    #           semiprojection | pixley_case
    index: int | None = None  # target variable for semiprojections, 1-based
    arity: int | None = None


@dataclass(frozen=True)
class MinimalityReport:
    verdict: Verdict
    path: str  # unary-monoid | minority-theorem | majority-3-minimal |
    #            theorem-fast-path | bounded-search
    witness: Operation | None
    n_max: int
    cap: int
    exact: bool


@dataclass(frozen=True)
class MinimalCloneClass:
    tag: str
    representative: Operation
    clone_count: int
    clone_representatives: tuple


@dataclass(frozen=True)
class EnumerationReport:
    k: int
    total_clones: int
    similarity_classes: int
    breakdown: dict  # tag -> number of similarity classes
    classes: tuple  # of MinimalCloneClass


# --- identity checking ----------------------------------------------------

def _want_arity(f, n, family):
    if f.arity != n:
        raise ArityMismatch(f"{family} needs arity {n}, got {f.arity}")


def _all_pairs(k):
    return itertools.product(range(k), repeat=2)


def _idempotent(f):
    k, n = f.k, f.arity
    return all(f.table[tuple_to_index((x,) * n, k)] == x for x in range(k))


def _commutes_with_self(f):
    k, n = f.k, f.arity
    t = f.table
    for flat in itertools.product(range(k), repeat=n * n):
        rows = [flat[i * n : (i + 1) * n] for i in range(n)]
        by_rows = t[
            tuple_to_index([t[tuple_to_index(r, k)] for r in rows], k)
        ]
        cols = [tuple(rows[i][j] for i in range(n)) for j in range(n)]
        by_cols = t[
            tuple_to_index([t[tuple_to_index(c, k)] for c in cols], k)
        ]
        if by_rows != by_cols:
            return False
    return True


def _is_wnu(f):
    k, n = f.k, f.arity
    if n < 2:
        raise ArityMismatch("weak near unanimity needs arity >= 2")
    if not _idempotent(f):
        return False
    for x, y in _all_pairs(k):
        args = [x] * n
        args[0] = y
        ref = f.table[tuple_to_index(args, k)]
        for i in range(1, n):
            args = [x] * n
            args[i] = y
            if f.table[tuple_to_index(args, k)] != ref:
                return False
    return True


def _semiprojection_law(f, i):
    """f returns its i-th argument on every tuple with a repeated entry."""
    k, n = f.k, f.arity
    if n < 3:
        raise ArityMismatch("semiprojections need arity >= 3")
    if not 1 <= i <= n:
        raise BadParams(f"variable index {i} outside 1..{n}")
    for idx, v in enumerate(f.table):
        args = index_to_tuple(idx, k, n)
        if len(set(args)) < n and v != args[i - 1]:
            return False
    return True


def check_identities(f, family):
    """Exhaustively test one identity family on f."""
    if isinstance(family, tuple):
        family, param = family
    else:
        family = str(family)
        param = None
        if family.startswith("semiprojection(") and family.endswith(")"):
            param = int(family[len("semiprojection(") : -1])
            family = "semiprojection"
    k = f.k
    t = f.table
    if family == "idempotent":
        return _idempotent(f)
    if family == "maltsev":
        _want_arity(f, 3, family)
        return all(
            t[tuple_to_index((x, x, y), k)] == y
            and t[tuple_to_index((y, x, x), k)] == y
            for x, y in _all_pairs(k)
        )
    if family == "majority":
        _want_arity(f, 3, family)
        return all(
            t[tuple_to_index((x, x, y), k)] == x
            and t[tuple_to_index((x, y, x), k)] == x
            and t[tuple_to_index((y, x, x), k)] == x
            for x, y in _all_pairs(k)
        )
    if family == "minority":
        _want_arity(f, 3, family)
        return all(
            t[tuple_to_index((x, y, y), k)] == x
            and t[tuple_to_index((y, x, y), k)] == x
            and t[tuple_to_index((y, y, x), k)] == x
            for x, y in _all_pairs(k)
        )
    if family == "arithmetical":
        _want_arity(f, 3, family)
        return all(
            t[tuple_to_index((x, x, y), k)] == y
            and t[tuple_to_index((y, x, y), k)] == y
            and t[tuple_to_index((y, x, x), k)] == y
            for x, y in _all_pairs(k)
        )
    if family == "nu":
        n = f.arity
        if n < 3:
            raise ArityMismatch("near unanimity needs arity >= 3")
        for x, y in _all_pairs(k):
            for i in range(n):
                args = [x] * n
                args[i] = y
                if t[tuple_to_index(args, k)] != x:
                    return False
        return True
    if family == "wnu":
        return _is_wnu(f)
    if family == "special_wnu":
        if not _is_wnu(f):
            return False
        n = f.arity
        for x, y in _all_pairs(k):
            inner = t[tuple_to_index([x] * (n - 1) + [y], k)]
            outer = t[tuple_to_index([x] * (n - 1) + [inner], k)]
            if outer != inner:
                return False
        return True
    if family == "rare_area":
        _want_arity(f, 4, family)
        return all(
            t[tuple_to_index((r, a, r, e), k)]
            == t[tuple_to_index((a, r, e, a), k)]
            for r, a, e in itertools.product(range(k), repeat=3)
        )
    if family == "olsak":
        _want_arity(f, 6, family)
        return all(
            t[tuple_to_index((x, y, y, y, x, x), k)]
            == t[tuple_to_index((y, x, y, x, y, x), k)]
            for x, y in _all_pairs(k)
        )
    if family in ("entropic", "self_commutation"):
        return _commutes_with_self(f)
    if family == "conservative":
        n = f.arity
        return all(
            v in index_to_tuple(idx, k, n) for idx, v in enumerate(t)
        )
    if family == "semiprojection":
        if param is None:
            raise BadParams("semiprojection needs a variable index")
        return _semiprojection_law(f, param)
    raise BadParams(f"unknown identity family {family!r}")


# --- identification minors and type classification ------------------------

def _identification_minor(g, a, b):
    """The minor of g obtained by substituting variable a for variable b
    (1-based, a < b)."""
    n = g.arity
    vm = {}
    for j in range(1, n + 1):
        if j == b:
            vm[j] = a
        elif j < b:
            vm[j] = j
        else:
            vm[j] = j - 1
    return minor(g, vm, n - 1)


_TERNARY_MINOR_IDX = {}


def _ternary_minor_arrays(k):
    """Gather indices extracting the three identification minors from a
    flat ternary table, plus the two binary projection tables."""
    if k in _TERNARY_MINOR_IDX:
        return _TERNARY_MINOR_IDX[k]
    idx12 = np.empty(k * k, dtype=np.int64)
    idx13 = np.empty(k * k, dtype=np.int64)
    idx23 = np.empty(k * k, dtype=np.int64)
    for u in range(k):
        for v in range(k):
            idx12[u * k + v] = (u * k + u) * k + v
            idx13[u * k + v] = (u * k + v) * k + u
            idx23[u * k + v] = (u * k + v) * k + v
    pr1 = np.repeat(np.arange(k), k)
    pr2 = np.tile(np.arange(k), k)
    out = (idx12, idx13, idx23, pr1, pr2)
    _TERNARY_MINOR_IDX[k] = out
    return out


# Letters per identification pair (12, 13, 23): R when the minor projects
# onto the repeated variable, L when onto the lone one.
_TERNARY_TAGS = {
    "RRR": MinimalType("majority", arity=3),
    "LLL": MinimalType("minority", arity=3),
    "RRL": MinimalType("semiprojection", index=1, arity=3),
    "RLR": MinimalType("semiprojection", index=2, arity=3),
    "LRR": MinimalType("semiprojection", index=3, arity=3),
    "LRL": MinimalType("pixley_case", arity=3),
    "RLL": MinimalType("pixley_case", arity=3),
    "LLR": MinimalType("pixley_case", arity=3),
}


def _ternary_patterns(k, tables):
    """R/L letter patterns for a batch of ternary tables; None where some
    identification minor is not a projection."""
    idx12, idx13, idx23, pr1, pr2 = _ternary_minor_arrays(k)
    X = np.asarray(tables, dtype=np.int64)
    if X.ndim == 1:
        X = X[None, :]
    out = []
    m12, m13, m23 = X[:, idx12], X[:, idx13], X[:, idx23]
    r12 = np.all(m12 == pr1, axis=1)
    l12 = np.all(m12 == pr2, axis=1)
    r13 = np.all(m13 == pr1, axis=1)
    l13 = np.all(m13 == pr2, axis=1)
    r23 = np.all(m23 == pr2, axis=1)
    l23 = np.all(m23 == pr1, axis=1)
    for i in range(X.shape[0]):
        letters = []
        for r, l in ((r12[i], l12[i]), (r13[i], l13[i]), (r23[i], l23[i])):
            if r:
                letters.append("R")
            elif l:
                letters.append("L")
            else:
                letters = None
                break
        out.append("".join(letters) if letters else None)
    return out


def classify_minimal_type(g):
    """Case split on the minors of g; g must turn into a projection under
    every identification of two variables."""
    n = g.arity
    if n == 1:
        return MinimalType("unary", arity=1)
    if n == 2:
        if not _idempotent(g):
            raise NotMinorsTrivial("binary operation is not idempotent")
        return MinimalType("binary_idempotent", arity=2)
    if n == 3:
        pattern = _ternary_patterns(g.k, [g.table])[0]
        if pattern is None:
            raise NotMinorsTrivial(
                "some identification of two variables is not a projection"
            )
        return _TERNARY_TAGS[pattern]
    # arity >= 4: all identifications must project onto one fixed variable
    candidates = set(range(1, n + 1))
    for a in range(1, n):
        for b in range(a + 1, n + 1):
            m = _identification_minor(g, a, b)
            p = is_projection(m)
            if p is None:
                raise NotMinorsTrivial(
                    f"identifying variables {a},{b} is not a projection"
                )
            if p == a:
                allowed = {a, b}
            else:
                allowed = {p if p < b else p + 1}
            candidates &= allowed
    if not candidates:
        raise SwierczkowskiViolation(
            "identification minors project onto inconsistent variables"
        )
    return MinimalType("semiprojection", index=min(candidates), arity=n)


def semiprojection_target(op):
    """The variable index op semiprojects onto (1-based), or None."""
    if op.arity < 3:
        return None
    for i in range(1, op.arity + 1):
        if _semiprojection_law(op, i):
            return i
    return None


def _minors_trivial(g):
    if g.arity == 1:
        return True
    try:
        classify_minimal_type(g)
        return True
    except (NotMinorsTrivial, SwierczkowskiViolation):
        return False


# --- Rosenberg's minority theorem ----------------------------------------

def detect_boolean_group_sum(f):
    """The elementary abelian 2-group table behind a minority f, if f is
    the ternary sum x + y + z of such a group; otherwise None.

    Fixing e = 0 and x (+) y := f(x, 0, y) is enough: if f is the group
    sum of any suitable group, the derived (+) is again one.
    """
    if not check_identities(f, "minority"):
        raise NotMinority("detect_boolean_group_sum needs a minority input")
    k, t = f.k, f.table
    plus = [[t[tuple_to_index((x, 0, y), k)] for y in range(k)] for x in range(k)]
    for x in range(k):
        if plus[x][x] != 0 or plus[x][0] != x or plus[0][x] != x:
            return None
    for x in range(k):
        for y in range(k):
            if plus[x][y] != plus[y][x]:
                return None
            for z in range(k):
                if plus[plus[x][y]][z] != plus[x][plus[y][z]]:
                    return None
    for idx, v in enumerate(t):
        x, y, z = index_to_tuple(idx, k, 3)
        if v != plus[plus[x][y]][z]:
            return None
    return tuple(tuple(row) for row in plus)


# --- minimal-arity witness ------------------------------------------------

def minimal_arity_witness(f, cap=DEFAULT_CAP):
    """The lexicographically smallest non-projection of minimal arity in
    Clo(f)."""
    if is_projection(f) is not None:
        raise PreconditionFailed("f must not be a projection")
    for r in range(1, f.arity + 1):
        part = clone_part([f], r, cap)
        if part.cap_hit:
            return Verdict.unknown({"reason": "cap_exceeded", "arity": r})
        nps = part.non_projections()
        if nps:
            g = min(nps, key=lambda op: op.table)
            return Verdict.yes(
                {"operation": g, "arity": r, "table": list(g.table)}
            )
    raise AssertionError("a non-projection f must appear in its own part")


# --- memoized single-generator parts -------------------------------------

_PART_MEMO = {}


def _part_of(h, n, cap):
    """Memoized (frozenset of tables, closed) for the arity-n part of
    Clo(h)."""
    key = (h.k, h.arity, h.table, n)
    hit = _PART_MEMO.get(key)
    if hit is not None and (hit[1] or hit[2] >= cap):
        return hit[0], hit[1]
    part = clone_part([h], n, cap)
    entry = (frozenset(part.ops), part.closed, cap)
    _PART_MEMO[key] = entry
    return entry[0], entry[1]


_BACK_MEMO = {}


def _back_generates(h, g, cap):
    """Does h generate g back?  Uses stability shortcuts, invariant
    refuters, and a target-seeking closure whose closed parts are cached
    for reuse across candidates."""
    from .closure import _quick_refute, _run_closure

    if h.table == g.table and h.arity == g.arity:
        return Verdict.yes({"reason": "generator"})
    if _minors_trivial(h) and h.arity >= 3 and g.arity < h.arity:
        # every part of Clo(h) below arity(h) is projections-only:
        # substituting fewer than arity(h) distinct projections into any
        # term forces a repeated argument, and the identification minors
        # of h are projections
        return Verdict.no({"reason": "low_arity_parts_trivial"})
    key = (h.arity, h.table, g.arity, g.table, cap)
    hit = _BACK_MEMO.get(key)
    if hit is not None:
        return hit
    part_key = (h.k, h.arity, h.table, g.arity)
    cached = _PART_MEMO.get(part_key)
    if cached is not None and (cached[1] or cached[2] >= cap):
        tables, closed = cached[0], cached[1]
        if g.table in tables:
            v = Verdict.yes({"reason": "closure"})
        elif closed:
            v = Verdict.no({"reason": "closed_part_without_target"})
        else:
            v = Verdict.unknown({"reason": "cap_exceeded"})
    elif _quick_refute([h], g) is not None:
        v = Verdict.no({"reason": "separating_invariant"})
    else:
        res = _run_closure(h.k, g.arity, [h], cap, target=g.table)
        if res["found_target"]:
            v = Verdict.yes({"reason": "closure"})
        elif res["closed"]:
            # the closure ran to completion, so the part is worth caching
            _PART_MEMO[part_key] = (frozenset(res["tables"]), True, cap)
            v = Verdict.no({"reason": "closed_part_without_target"})
        else:
            v = Verdict.unknown({"reason": "cap_exceeded"})
    _BACK_MEMO[key] = v
    return v


# --- the minimality decision procedure -----------------------------------

def _report(verdict, path, witness, n_max, cap, exact):
    return MinimalityReport(
        verdict=verdict,
        path=path,
        witness=witness,
        n_max=n_max,
        cap=cap,
        exact=exact,
    )


def _unary_monoid_path(g, n_max, cap):
    """Clo(g) for unary g is {g, g^2, ...} plus the identity; minimal iff
    every non-identity power generates g back."""
    part = clone_part([g], 1, cap)
    ident = tuple(range(g.k))
    for table in sorted(part.ops):
        if table == ident:
            continue
        cur = table
        seen = set()
        found = False
        while cur not in seen:
            seen.add(cur)
            if cur == g.table:
                found = True
                break
            cur = tuple(table[v] for v in cur)
        if not found:
            return _report(
                Verdict.no({"non_generating_power": list(table)}),
                "unary-monoid",
                Operation(g.k, 1, table),
                n_max,
                cap,
                True,
            )
    return _report(Verdict.yes(), "unary-monoid", None, n_max, cap, True)


def _is_rectangular_band(g):
    k, t = g.k, g.table
    for x in range(k):
        for y in range(k):
            xy = t[x * k + y]
            if t[xy * k + x] != x:
                return False
            for z in range(k):
                if t[xy * k + z] != t[x * k + t[y * k + z]]:
                    return False
    return True


def _p_cyclic_prime(g):
    """The prime p if g satisfies the p-cyclic groupoid laws, else None."""
    k, t = g.k, g.table
    for x in range(k):
        for y in range(k):
            for z in range(k):
                if t[x * k + t[y * k + z]] != t[x * k + y]:
                    return None
                if t[t[x * k + y] * k + z] != t[t[x * k + z] * k + y]:
                    return None
    for p in range(2, k * k + 2):
        ok = True
        for x in range(k):
            for y in range(k):
                cur = x
                for _ in range(p):
                    cur = t[cur * k + y]
                if cur != x:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return p if all(p % q for q in range(2, p)) else None
    return None


def _binary_fast_path(g):
    """Identity-certified minimal binary clones: rectangular bands,
    p-cyclic groupoids, and idempotent affine forms over Z_p."""
    from .relations import in_affine_clone

    if _is_rectangular_band(g):
        return "rectangular_band"
    if _p_cyclic_prime(g) is not None:
        return "p_cyclic_groupoid"
    k = g.k
    if all(k % q for q in range(2, k)) and in_affine_clone(g, k):
        # non-projections ax + (1-a)y all generate the clone of x - y + z
        return "affine_z_p"
    return None


def _bitransitive_relations(m):
    """All bitransitive binary relations on {0..m-1}."""
    out = []
    offdiag = [(a, b) for a in range(m) for b in range(m) if a != b]
    for bits in range(1, 2 ** len(offdiag)):
        rel = {(x, x) for x in range(m)}
        for i, p in enumerate(offdiag):
            if bits >> i & 1:
                rel.add(p)
        if _bitransitive(rel, m):
            out.append(frozenset(rel))
    return out


def _semiprojection_k_path(g, n_max, cap):
    """For a k-ary semiprojection on a k-set (always conservative), the
    clone is minimal iff it is generated by s_rho for a bitransitive rho.
    Each Clo(s_rho) is minimal, so membership of g alone decides: g in
    Clo(s_rho) forces equality of the clones."""
    from .core import builtin
    from .relations import Relation

    k = g.k
    for rho in sorted(_bitransitive_relations(k), key=sorted):
        s = builtin("s_rho", rho=Relation(k, 2, tuple(sorted(rho))))
        v = generates([s], g, cap)
        if v.is_yes:
            return _report(
                Verdict.yes({"law": "s_rho_bitransitive"}),
                "theorem-fast-path",
                None,
                n_max,
                cap,
                True,
            )
        if v.is_unknown:
            return _report(
                Verdict.unknown({"reason": "cap_exceeded"}),
                "theorem-fast-path",
                None,
                n_max,
                cap,
                False,
            )
    return _report(
        Verdict.no({"reason": "outside_every_s_rho_clone"}),
        "theorem-fast-path",
        None,
        n_max,
        cap,
        True,
    )


def _search_round(g, r, cap, check):
    """Closure at arity r over {g}; check(h) is called on every
    minors-trivial non-projection and returns a Verdict.  Returns
    (witness, unknown_flag, stopped_part)."""
    state = {"witness": None, "unknown": False}

    def hook(fresh):
        if r == 3:
            patterns = _ternary_patterns(g.k, fresh)
            picks = [
                t for t, p in zip(fresh, patterns) if p is not None
            ]
        else:
            picks = fresh
        for t in picks:
            h = Operation(g.k, r, t)
            if is_projection(h) is not None:
                continue
            if r != 3 and not _minors_trivial(h):
                continue
            v = check(h)
            if v.is_no:
                state["witness"] = h
                return True
            if v.is_unknown:
                state["unknown"] = True
                return True
        return False

    part = clone_part([g], r, cap, hook=hook)
    if state["witness"] is not None:
        return state["witness"], False
    if state["unknown"] or part.cap_hit:
        return None, True
    return None, False


def _bounded_search(g, n_max, cap):
    """Exact when n_max >= max(3, k): every nontrivial clone on k elements
    contains a minors-trivial non-projection of arity <= max(3, k), so it
    is enough to test those.  In detail: if some non-projection h in
    Clo(g) fails to generate g, then Clo(h) is a nontrivial clone not
    containing g, and its minors-trivial member t of arity <= max(3, k)
    lies in the searched parts and also fails to generate g.  Parts below
    arity(g) are projections-only for minors-trivial g and are skipped.
    """
    k = g.k
    exact = n_max >= max(3, k)
    if g.arity > n_max:
        return _report(
            Verdict.unknown({"reason": "witness_arity_above_n_max"}),
            "bounded-search",
            None,
            n_max,
            cap,
            False,
        )
    for r in range(g.arity, n_max + 1):
        if g.arity == 1 and r == 1:
            rep = _unary_monoid_path(g, n_max, cap)
            if rep.verdict.is_no:
                return _report(
                    rep.verdict, "bounded-search", rep.witness, n_max, cap, True
                )
            continue
        if g.arity == 1 and r > 1:
            # higher parts of a unary clone hold no minors-trivial
            # non-projections; the r = 1 round already covered the
            # witnesses the exactness argument needs
            continue
        witness, unknown = _search_round(
            g, r, cap, lambda h: _back_generates(h, g, cap)
        )
        if witness is not None:
            return _report(
                Verdict.no({"witness_table": list(witness.table)}),
                "bounded-search",
                witness,
                n_max,
                cap,
                True,
            )
        if unknown:
            return _report(
                Verdict.unknown({"reason": "cap_exceeded", "arity": r}),
                "bounded-search",
                None,
                n_max,
                cap,
                False,
            )
    if exact:
        return _report(Verdict.yes(), "bounded-search", None, n_max, cap, True)
    return _report(
        Verdict.unknown({"reason": "n_max_below_exactness_threshold"}),
        "bounded-search",
        None,
        n_max,
        cap,
        False,
    )


def _majority_path(g, n_max, cap):
    """3-minimality: every minors-trivial ternary member must generate g
    back, which settles minimality for majority generators."""
    witness, unknown = _search_round(
        g, 3, cap, lambda h: _back_generates(h, g, cap)
    )
    if witness is not None:
        return _report(
            Verdict.no({"witness_table": list(witness.table)}),
            "majority-3-minimal",
            witness,
            n_max,
            cap,
            True,
        )
    if unknown:
        return _report(
            Verdict.unknown({"reason": "cap_exceeded"}),
            "majority-3-minimal",
            None,
            n_max,
            cap,
            False,
        )
    return _report(Verdict.yes(), "majority-3-minimal", None, n_max, cap, True)


def is_minimal_clone(f, n_max=None, cap=DEFAULT_CAP, method="auto"):
    """Does f generate a minimal clone?

    method="auto" routes through the theorem paths (unary monoid analysis,
    the minority theorem, majority 3-minimality, identity-certified binary
    fast paths) before the bounded search; method="search" forces the
    bounded search, which is exact whenever n_max >= max(3, k).
    """
    if is_projection(f) is not None:
        raise PreconditionFailed("projections do not generate minimal clones")
    k = f.k
    if n_max is None:
        n_max = max(3, k)
    if _minors_trivial(f):
        # the parts of Clo(f) below arity(f) are projections-only, so f
        # itself has minimal arity among the non-projections
        g = f
    else:
        mw = minimal_arity_witness(f, cap)
        if mw.is_unknown:
            return _report(mw, "bounded-search", None, n_max, cap, False)
        g = mw.certificate["operation"]
    if (g.arity, g.table) != (f.arity, f.table):
        back = generates([g], f, cap)
        if back.is_no:
            return _report(
                Verdict.no({"witness_table": list(g.table)}),
                "bounded-search",
                g,
                n_max,
                cap,
                True,
            )
        if back.is_unknown:
            return _report(
                Verdict.unknown({"reason": "cap_exceeded"}),
                "bounded-search",
                None,
                n_max,
                cap,
                False,
            )
    if method == "search":
        return _bounded_search(g, n_max, cap)
    if method != "auto":
        raise BadParams(f"unknown method {method!r}")
    if g.arity == 1:
        return _unary_monoid_path(g, n_max, cap)
    mtype = classify_minimal_type(g)
    if mtype.tag == "minority":
        group = detect_boolean_group_sum(g)
        if group is not None:
            return _report(
                Verdict.yes({"group_table": [list(r) for r in group]}),
                "minority-theorem",
                None,
                n_max,
                cap,
                True,
            )
        return _report(
            Verdict.no({"reason": "not_a_boolean_group_sum"}),
            "minority-theorem",
            None,
            n_max,
            cap,
            True,
        )
    if mtype.tag == "majority":
        return _majority_path(g, n_max, cap)
    if mtype.tag == "semiprojection" and g.arity == k:
        return _semiprojection_k_path(g, n_max, cap)
    if mtype.tag == "binary_idempotent":
        law = _binary_fast_path(g)
        if law is not None:
            return _report(
                Verdict.yes({"law": law}),
                "theorem-fast-path",
                None,
                n_max,
                cap,
                True,
            )
    return _bounded_search(g, n_max, cap)


# --- census ---------------------------------------------------------------

def _unary_candidates(k):
    ident = tuple(range(k))
    for table in itertools.product(range(k), repeat=k):
        if table != ident:
            yield Operation(k, 1, table)


def _binary_idempotent_candidates(k):
    free = [
        (x, y) for x in range(k) for y in range(k) if x != y
    ]
    for vals in itertools.product(range(k), repeat=len(free)):
        table = [0] * (k * k)
        for x in range(k):
            table[x * k + x] = x
        for (x, y), v in zip(free, vals):
            table[x * k + y] = v
        op = Operation(k, 2, tuple(table))
        if is_projection(op) is None:
            yield op


def _ternary_pattern_candidates(k, pattern_fill):
    """Ternary tables forced on repeated-entry triples by pattern_fill
    (args -> value) and free on distinct triples."""
    distinct = [
        t
        for t in itertools.product(range(k), repeat=3)
        if len(set(t)) == 3
    ]
    base = [0] * k**3
    for idx in range(k**3):
        args = index_to_tuple(idx, k, 3)
        if len(set(args)) < 3:
            base[idx] = pattern_fill(args)
    for vals in itertools.product(range(k), repeat=len(distinct)):
        table = list(base)
        for t, v in zip(distinct, vals):
            table[tuple_to_index(t, k)] = v
        op = Operation(k, 3, tuple(table))
        if is_projection(op) is None:
            yield op


def _majority_fill(args):
    x, y, z = args
    return x if x in (y, z) else y


def _minority_fill(args):
    x, y, z = args
    if x == y:
        return z
    if x == z:
        return y
    return x


def _census_candidates(k):
    yield from _unary_candidates(k)
    yield from _binary_idempotent_candidates(k)
    yield from _ternary_pattern_candidates(k, _majority_fill)
    yield from _ternary_pattern_candidates(k, _minority_fill)
    for i in (1, 2, 3):
        yield from _ternary_pattern_candidates(k, lambda a, i=i: a[i - 1])


_TAG_SHORT = {
    "unary": "unary",
    "binary_idempotent": "binary",
    "majority": "majority",
    "minority": "minority",
    "semiprojection": "semiprojection",
    "pixley_case": "pixley",
}


def enumerate_minimal_clones(k, cap=DEFAULT_CAP):
    """All minimal clones on k in {2, 3}, grouped into similarity classes
    by the canonical key of their ternary parts."""
    if k not in (2, 3):
        raise DomainTooLarge("the census covers k = 2 and k = 3 only")
    winners = []
    caps = sorted({min(4000, cap), cap})
    for op in _census_candidates(k):
        rep = None
        for c in caps:
            rep = is_minimal_clone(op, n_max=3, cap=c)
            if not rep.verdict.is_unknown:
                break
        if rep.verdict.is_unknown:
            raise Inconclusive(
                f"census capped at {cap} on table {list(op.table)}"
            )
        if rep.verdict.is_yes:
            winners.append(op)
    # clones generated by operations of arity <= 3 are determined by
    # their ternary parts
    clones = {}
    for op in winners:
        tables, closed = _part_of(op, 3, cap)
        if not closed:
            raise Inconclusive("ternary part of a winner hit the cap")
        key = tuple(sorted(tables))
        cur = clones.get(key)
        if cur is None or (op.arity, op.table) < (cur.arity, cur.table):
            clones[key] = op
    by_class = {}
    for key, rep_op in sorted(clones.items()):
        part = clone_part([rep_op], 3, cap)
        ck = canonical_key(part)
        by_class.setdefault(ck, []).append(rep_op)
    classes = []
    for ck in sorted(by_class):
        reps = sorted(by_class[ck], key=lambda o: (o.arity, o.table))
        lead = reps[0]
        g = minimal_arity_witness(lead, cap).certificate["operation"]
        tag = _TAG_SHORT[classify_minimal_type(g).tag]
        classes.append(
            MinimalCloneClass(
                tag=tag,
                representative=lead,
                clone_count=len(reps),
                clone_representatives=tuple(reps),
            )
        )
    classes.sort(
        key=lambda c: (c.representative.arity, c.representative.table)
    )
    breakdown = {}
    for c in classes:
        breakdown[c.tag] = breakdown.get(c.tag, 0) + 1
    return EnumerationReport(
        k=k,
        total_clones=len(clones),
        similarity_classes=len(classes),
        breakdown=breakdown,
        classes=tuple(classes),
    )


# --- conservative criteria ------------------------------------------------

def _restrict_relabel(f, B):
    """f restricted to the subset B, relabeled along sorted(B)."""
    B = sorted(B)
    pos = {v: i for i, v in enumerate(B)}
    m = len(B)
    n = f.arity
    table = []
    for idx in range(m**n):
        args = index_to_tuple(idx, m, n)
        v = f.table[tuple_to_index([B[a] for a in args], f.k)]
        table.append(pos[v])
    return Operation(m, n, tuple(table))


def _binary_conservative(f):
    k = f.k
    semilattice = False
    sides = set()
    for B in itertools.combinations(range(k), 2):
        r = _restrict_relabel(f, B)
        ab, ba = r.table[1], r.table[2]
        if ab == ba:
            semilattice = True
        elif ab == 0:
            sides.add(1)
        else:
            sides.add(2)
    if semilattice and len(sides) <= 1:
        return Verdict.yes({"criterion": "binary_semilattice"})
    reason = (
        "no_semilattice_restriction"
        if not semilattice
        else "mixed_projection_restrictions"
    )
    return Verdict.no({"reason": reason})


def _majority_conservative(f, cap):
    k = f.k
    seen = {}
    for B in itertools.combinations(range(k), 3):
        r = _restrict_relabel(f, B)
        rep = is_minimal_clone(r, n_max=3, cap=cap)
        if rep.verdict.is_unknown:
            return Verdict.unknown({"reason": "cap_exceeded"})
        if rep.verdict.is_no:
            return Verdict.no(
                {"reason": "non_minimal_restriction", "subset": list(B)}
            )
        part = clone_part([r], 3, cap)
        clone_key = canonical_key(part)
        op_key = canonical_key(r)
        if clone_key in seen and seen[clone_key] != op_key:
            return Verdict.no(
                {"reason": "similar_but_non_isomorphic_restrictions"}
            )
        seen[clone_key] = op_key
    return Verdict.yes({"criterion": "majority_isomorphic_restrictions"})


def _bitransitive(rel_pairs, m):
    loops = {(x, x) for x in range(m)}
    if not loops <= rel_pairs:
        return False
    offdiag = rel_pairs - loops
    if not offdiag:
        return False
    for a, b in rel_pairs:
        for c, d in rel_pairs:
            if b == c and (a, d) not in rel_pairs:
                return False
    autos = [
        pi
        for pi in itertools.permutations(range(m))
        if {(pi[a], pi[b]) for a, b in rel_pairs} == rel_pairs
    ]
    first = next(iter(sorted(offdiag)))
    orbit = {(pi[first[0]], pi[first[1]]) for pi in autos}
    return orbit == offdiag


def _semiprojection_rho(g):
    """The relation rho with g = s_rho, or None."""
    m, n = g.k, g.arity
    rho = {(x, x) for x in range(m)}
    for idx, v in enumerate(g.table):
        args = index_to_tuple(idx, m, n)
        if len(set(args)) == n and v == args[-1] and v != args[0]:
            rho.add((args[0], args[-1]))
    for idx, v in enumerate(g.table):
        args = index_to_tuple(idx, m, n)
        if len(set(args)) == n and (args[0], args[-1]) in rho:
            if v != args[-1]:
                return None
        elif v != args[0]:
            return None
    return rho


def _semiprojection_conservative(f, cap):
    n = f.arity
    k = f.k
    structures = []
    for B in itertools.combinations(range(k), n):
        r = _restrict_relabel(f, B)
        p = is_projection(r)
        if p == 1:
            continue
        if p is not None:
            return Verdict.no({"reason": "restriction_projects_elsewhere"})
        rho = _semiprojection_rho(r)
        if rho is None or not _bitransitive(rho, n):
            return Verdict.no({"reason": "restriction_not_s_rho_form"})
        from .relations import Relation

        structures.append(canonical_key(Relation(n, 2, tuple(sorted(rho)))))
    if not structures:
        return Verdict.no({"reason": "all_restrictions_are_projections"})
    if len(set(structures)) > 1:
        return Verdict.no({"reason": "non_isomorphic_bitransitive_structures"})
    if k == n:
        return Verdict.yes({"criterion": "s_rho_bitransitive"})
    # condition (*) is necessary but not sufficient above the base size;
    # fall back to the exact bounded search
    rep = is_minimal_clone(f, n_max=max(3, k), cap=cap)
    return rep.verdict


def conservative_minimal_check(f, cap=DEFAULT_CAP):
    """Csakany's binary and majority criteria and the Jezek-Quackenbush
    semiprojection condition for conservative operations."""
    if not check_identities(f, "conservative"):
        raise NotConservative("input does not preserve every subset")
    if f.arity == 2:
        if not _idempotent(f):
            raise WrongShape("binary input must be idempotent")
        return _binary_conservative(f)
    if f.arity == 3 and check_identities(f, "majority"):
        return _majority_conservative(f, cap)
    if f.arity >= 3 and semiprojection_target(f) is not None:
        if f.arity > f.k:
            raise WrongShape("semiprojection arity exceeds the domain size")
        return _semiprojection_conservative(f, cap)
    raise WrongShape(
        "expected a binary idempotent, majority, or semiprojection input"
    )


# --- Taylor witness -------------------------------------------------------

def _projection_only_subalgebra(F, k):
    """A subset B (|B| >= 2) closed under every f in F on which every f
    restricts to a projection, or None.

    Such a B refutes any Taylor witness: a clone member t restricts to a
    member of the projections-only clone on B, and a projection on two or
    more elements falsifies every Taylor identity, including rare-area.
    """
    for size in range(2, k + 1):
        for B in itertools.combinations(range(k), size):
            ok = True
            for f in F:
                closed = all(
                    f.table[tuple_to_index(args, k)] in B
                    for args in itertools.product(B, repeat=f.arity)
                )
                if not closed or is_projection(_restrict_relabel(f, B)) is None:
                    ok = False
                    break
            if ok:
                return list(B)
    return None


def has_taylor_witness(F, cap=DEFAULT_CAP):
    """Search the 4-ary part of Clo(F) for an idempotent operation t with
    t(r,a,r,e) = t(a,r,e,a) everywhere.

    A projection-only subalgebra is checked first: it yields a definite no
    even when the 4-ary part is too large to close (semiprojection-generated
    clones have small minors-trivial skeletons but enormous 4-ary parts)."""
    F = list(F)
    k = F[0].k
    B = _projection_only_subalgebra(F, k)
    if B is not None:
        return Verdict.no(
            {"reason": "projection_only_subalgebra", "subset": B}
        )
    state = {"witness": None}

    def hook(fresh):
        for t in fresh:
            op = Operation(k, 4, t)
            if check_identities(op, "idempotent") and check_identities(
                op, "rare_area"
            ):
                state["witness"] = op
                return True
        return False

    part = clone_part(F, 4, cap, hook=hook)
    if state["witness"] is not None:
        return Verdict.yes({"witness_table": list(state["witness"].table)})
    if part.closed:
        return Verdict.no({"reason": "closed_part_without_witness"})
    return Verdict.unknown({"reason": "cap_exceeded", "cap": cap})


# --- essential minimality, type A ----------------------------------------

def _gamma(star):
    """The largest subset on which the unary table star is a permutation:
    the union of its cycles."""
    k = len(star)
    reach = set(range(k))
    while True:
        nxt = {star[x] for x in reach}
        if nxt == reach:
            return sorted(reach)
        reach = nxt


def _restricted_essential_vars(f, G):
    k, n = f.k, f.arity
    out = set()
    for i in range(n):
        for args in itertools.product(G, repeat=n):
            for b in G:
                if b == args[i]:
                    continue
                other = list(args)
                other[i] = b
                if (
                    f.table[tuple_to_index(args, k)]
                    != f.table[tuple_to_index(other, k)]
                ):
                    out.add(i)
                    break
            if i in out:
                break
    return out


def _variable_manipulations(f, m):
    """All minors of f with target arity m, as a set of tables."""
    n = f.arity
    out = set()
    for targets in itertools.product(range(1, m + 1), repeat=n):
        vm = {j + 1: targets[j] for j in range(n)}
        out.add(minor(f, vm, m).table)
    return out


def _lazy_clone_check(f, cap):
    """Is Clo(f) a lazy clone?  Definite no when some small part holds a
    table that is not a variable manipulation of f; definite yes via the
    composition test at arity n^2 when affordable."""
    from .core import projection

    k, n = f.k, f.arity
    for r in range(1, n + 2):
        part = clone_part([f], r, cap)
        if part.cap_hit:
            return None
        allowed = _variable_manipulations(f, r) | {
            projection(k, r, i + 1).table for i in range(r)
        }
        if any(t not in allowed for t in part.ops):
            return False
    m = n * n
    manips = _variable_manipulations(f, m) | {
        projection(k, m, i + 1).table for i in range(m)
    }
    if len(manips) ** n > 2 * 10**6:
        return None
    pool = sorted(manips)
    for choice in itertools.product(pool, repeat=n):
        composed = tuple(
            f.table[
                tuple_to_index([g[idx] for g in choice], k)
            ]
            for idx in range(k**m)
        )
        if composed not in manips:
            return False
    return True


def essential_minimality_typeA(f, cap=DEFAULT_CAP):
    """Machida-Rosenberg decision for non-idempotent generators whose
    restriction to Gamma(f) is essential."""
    k, n = f.k, f.arity
    star = tuple(f.table[tuple_to_index((x,) * n, k)] for x in range(k))
    if star == tuple(range(k)):
        raise IdempotentInput("f must not be idempotent")
    G = _gamma(star)
    if len(_restricted_essential_vars(f, G)) < 2:
        raise WrongType("type B: the restriction to Gamma(f) is not essential")
    for idx, v in enumerate(f.table):
        args = index_to_tuple(idx, k, n)
        if v != f.table[tuple_to_index([star[a] for a in args], k)]:
            return Verdict.no({"reason": "star_identity_fails"})
    in_range = all(
        f.table[tuple_to_index(args, k)] in G
        for args in itertools.product(G, repeat=n)
    )
    if in_range:
        sub = _restrict_relabel(f, G)
        rep = is_minimal_clone(sub, cap=cap)
        return Verdict(
            rep.verdict.answer,
            {"branch": "restriction_minimal", "path": rep.path},
        )
    # branch (ii)(b)
    outer = tuple(star[v] for v in f.table)
    if len(essential_vars(Operation(k, n, outer))) > 1:
        return Verdict.no({"reason": "star_composition_not_essentially_unary"})
    lazy = _lazy_clone_check(f, cap)
    if lazy is False:
        return Verdict.no({"reason": "not_a_lazy_clone"})
    if lazy is None:
        return Verdict.unknown({"reason": "lazy_check_capped"})
    for targets in itertools.product(range(1, n + 1), repeat=n):
        vm = {j + 1: targets[j] for j in range(n)}
        g = minor(f, vm, n)
        if len(essential_vars(g)) < 2:
            continue
        v = generates([g], f, cap)
        if v.is_no:
            return Verdict.no({"non_generating_minor": list(g.table)})
        if v.is_unknown:
            return Verdict.unknown({"reason": "cap_exceeded"})
    return Verdict.yes({"branch": "lazy_minimal"})


# --- clone comparison -----------------------------------------------------

def clones_equal(f, g, cap=DEFAULT_CAP):
    if f.k != g.k:
        raise BadParams("operations live on different domains")
    a = generates([f], g, cap)
    b = generates([g], f, cap)
    if a.is_no or b.is_no:
        return Verdict.no()
    if a.is_unknown or b.is_unknown:
        return Verdict.unknown({"reason": "cap_exceeded"})
    return Verdict.yes()


def clones_similar(f, g, cap=DEFAULT_CAP):
    if f.k != g.k:
        raise BadParams("operations live on different domains")
    saw_unknown = False
    for pi in itertools.permutations(range(f.k)):
        v = clones_equal(conjugate(f, pi), g, cap)
        if v.is_yes:
            return Verdict.yes({"bijection": list(pi)})
        if v.is_unknown:
            saw_unknown = True
    if saw_unknown:
        return Verdict.unknown({"reason": "cap_exceeded"})
    return Verdict.no()
