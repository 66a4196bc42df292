"""Value-table representation of finitary operations on {0..k-1}.

An n-ary operation is stored as a flat table of length k**n.  The table is
indexed mixed-radix with the FIRST argument most significant:

    index(a_1, ..., a_n) = sum a_i * k**(n-i)

This order is fixed once here and used bit-exactly in file formats and by
every other module.
"""

from dataclasses import dataclass
import itertools

from .errors import (
    ArityMismatch,
    BadArity,
    BadIndex,
    BadMap,
    BadParams,
    DomainMismatch,
    DomainTooLarge,
    LengthMismatch,
    ValueOutOfRange,
)

# canonical_key enumerates all k! bijections; beyond this it is refused
MAX_CANONICAL_K = 6


def tuple_to_index(args, k):
    idx = 0
    for a in args:
        idx = idx * k + a
    return idx


def index_to_tuple(idx, k, n):
    out = [0] * n
    for i in range(n - 1, -1, -1):
        out[i] = idx % k
        idx //= k
    return tuple(out)


@dataclass(frozen=True)
class Operation:
    k: int
    arity: int
    table: tuple

    def __call__(self, *args):
        return ev(self, args)

    def __repr__(self):
        return f"Operation(k={self.k}, arity={self.arity}, table={list(self.table)})"


@dataclass(frozen=True)
class OperationProfile:
    projection_index: int | None
    idempotent: bool
    surjective: bool
    essential_vars: frozenset


def make_operation(k, arity, table):
    if k < 2:
        raise BadParams(f"domain size must be at least 2, got {k}")
    if arity < 1:
        raise BadArity(f"arity must be at least 1, got {arity}")
    table = tuple(int(v) for v in table)
    if len(table) != k**arity:
        raise LengthMismatch(
            f"table length {len(table)} != {k}**{arity} = {k**arity}"
        )
    for v in table:
        if not 0 <= v < k:
            raise ValueOutOfRange(f"table entry {v} outside 0..{k - 1}")
    return Operation(k, arity, table)


def projection(k, n, i):
    """The n-ary projection onto the i-th argument (1-based)."""
    if not 1 <= i <= n:
        raise BadIndex(f"projection index {i} outside 1..{n}")
    table = tuple(index_to_tuple(idx, k, n)[i - 1] for idx in range(k**n))
    return Operation(k, n, table)


def ev(f, args):
    if len(args) != f.arity:
        raise ArityMismatch(f"expected {f.arity} arguments, got {len(args)}")
    for a in args:
        if not 0 <= a < f.k:
            raise ValueOutOfRange(f"argument {a} outside 0..{f.k - 1}")
    return f.table[tuple_to_index(args, f.k)]


def compose(f, gs):
    """The superposition f(g_1, ..., g_n), all g_i of one common arity."""
    if len(gs) != f.arity:
        raise ArityMismatch(f"need {f.arity} inner operations, got {len(gs)}")
    m = gs[0].arity
    for g in gs:
        if g.k != f.k:
            raise DomainMismatch("inner operation on a different domain")
        if g.arity != m:
            raise ArityMismatch("inner operations must share one arity")
    k = f.k
    ft = f.table
    inner = [g.table for g in gs]
    table = []
    for idx in range(k**m):
        j = 0
        for t in inner:
            j = j * k + t[idx]
        table.append(ft[j])
    return Operation(k, m, tuple(table))


def minor(f, var_map, target_arity):
    """The minor g(x_1..x_t) = f(x_{var_map[1]}, ..., x_{var_map[n]}).

    var_map is a dict from f's argument positions (1-based) to target
    positions; identification, permutation and fictitious variables are all
    expressible this way.
    """
    if target_arity < 1:
        raise BadArity("target arity must be at least 1")
    if set(var_map) != set(range(1, f.arity + 1)):
        raise BadMap("var_map must be total on f's argument positions")
    for tgt in var_map.values():
        if not 1 <= tgt <= target_arity:
            raise BadMap(f"target position {tgt} outside 1..{target_arity}")
    k = f.k
    table = []
    for args in itertools.product(range(k), repeat=target_arity):
        inner = tuple(args[var_map[j] - 1] for j in range(1, f.arity + 1))
        table.append(f.table[tuple_to_index(inner, k)])
    return Operation(k, target_arity, tuple(table))


def is_projection(f):
    """The projection index of f (1-based), or None."""
    k, n = f.k, f.arity
    for i in range(n):
        ok = True
        for idx, v in enumerate(f.table):
            if index_to_tuple(idx, k, n)[i] != v:
                ok = False
                break
        if ok:
            return i + 1
    return None


def essential_vars(f):
    k, n = f.k, f.arity
    out = set()
    if n == 1:
        # unary: essential iff non-constant
        if any(v != f.table[0] for v in f.table):
            out.add(1)
        return frozenset(out)
    for i in range(n):
        stride = k ** (n - 1 - i)
        block = stride * k
        found = False
        for base in range(0, k**n, block):
            for off in range(stride):
                first = f.table[base + off]
                for step in range(1, k):
                    if f.table[base + off + step * stride] != first:
                        found = True
                        break
                if found:
                    break
            if found:
                break
        if found:
            out.add(i + 1)
    return frozenset(out)


def analyze(f):
    k, n = f.k, f.arity
    diag = tuple(f.table[tuple_to_index((x,) * n, k)] for x in range(k))
    return OperationProfile(
        projection_index=is_projection(f),
        idempotent=all(diag[x] == x for x in range(k)),
        surjective=len(set(f.table)) == k,
        essential_vars=essential_vars(f),
    )


def conjugate(x, pi):
    """Conjugate an Operation or Relation by a bijection pi of {0..k-1}.

    For operations: (pi f)(x_1..x_n) = pi(f(pi^-1 x_1, ..., pi^-1 x_n)).
    Relations are mapped tuple-wise.
    """
    pi = tuple(pi)
    if sorted(pi) != list(range(x.k)):
        raise DomainMismatch("pi is not a bijection of the domain")
    if hasattr(x, "table"):
        k, n = x.k, x.arity
        inv = [0] * k
        for i, v in enumerate(pi):
            inv[v] = i
        table = []
        for args in itertools.product(range(k), repeat=n):
            pre = tuple(inv[a] for a in args)
            table.append(pi[x.table[tuple_to_index(pre, k)]])
        return Operation(k, n, tuple(table))
    if hasattr(x, "tuples"):
        mapped = sorted(tuple(pi[a] for a in t) for t in x.tuples)
        return type(x)(x.k, x.arity, tuple(mapped))
    raise DomainMismatch(f"cannot conjugate {type(x).__name__}")


def _serialize(x):
    if hasattr(x, "table"):
        return bytes([x.k, x.arity]) + bytes(x.table)
    if hasattr(x, "tuples"):
        flat = bytes([x.k, x.arity])
        for t in x.tuples:
            flat += bytes(t)
        return flat
    if hasattr(x, "ops"):
        flat = bytes([x.k, x.arity])
        for t in sorted(x.ops):
            flat += bytes(t)
        return flat
    raise DomainMismatch(f"cannot serialize {type(x).__name__}")


def _conjugate_serialized(x, pi):
    if hasattr(x, "table") or hasattr(x, "tuples"):
        return _serialize(conjugate(x, pi))
    # arity-n slice of a clone: conjugate every member table, sort
    k, n = x.k, x.arity
    ops = [conjugate(Operation(k, n, t), pi).table for t in x.ops]
    flat = bytes([k, n])
    for t in sorted(ops):
        flat += bytes(t)
    return flat


def canonical_key(x):
    """Lexicographic minimum of the serialized form over all k! conjugations.

    Two inputs are similar (equal up to relabeling the domain) iff their
    keys are equal.
    """
    if x.k > MAX_CANONICAL_K:
        raise DomainTooLarge(f"canonical_key capped at k <= {MAX_CANONICAL_K}")
    return min(
        _conjugate_serialized(x, pi)
        for pi in itertools.permutations(range(x.k))
    )


def _from_rule(k, arity, rule):
    table = tuple(
        rule(*args) for args in itertools.product(range(k), repeat=arity)
    )
    return make_operation(k, arity, table)


def star_extension(f):
    """Extend a majority operation on {0..k-1} to a majority operation on
    {0..k}: on triples of old elements use f; a triple of distinct elements
    containing the new top element returns its first argument."""
    from .minimal import check_identities  # local import, no cycle at load

    if not check_identities(f, "majority"):
        raise BadParams("star_extension needs a majority operation")
    k = f.k

    def rule(a, b, c):
        if a == b or a == c:
            return a
        if b == c:
            return b
        if a < k and b < k and c < k:
            return f(a, b, c)
        return a

    return _from_rule(k + 1, 3, rule)


def builtin(name, **params):
    """Named operations from the catalog.  See _CATALOG for the tags."""
    try:
        factory = _CATALOG[name]
    except KeyError:
        raise BadParams(f"unknown builtin {name!r}") from None
    return factory(**params)


def _b_and(k=2):
    return _from_rule(k, 2, min)


def _b_or(k=2):
    return _from_rule(k, 2, max)


def _b_not(k=2):
    if k != 2:
        raise BadParams("negation is a k=2 builtin")
    return make_operation(2, 1, (1, 0))


def _b_const(k, value):
    if not 0 <= value < k:
        raise BadParams("constant value outside the domain")
    return make_operation(k, 1, (value,) * k)


def _b_cycle(k):
    """The full cycle x -> x+1 mod k."""
    return _from_rule(k, 1, lambda x: (x + 1) % k)


def _b_max(k):
    return _from_rule(k, 2, max)


def _b_min(k):
    return _from_rule(k, 2, min)


def _b_median(k):
    return _from_rule(k, 3, lambda a, b, c: sorted((a, b, c))[1])


def _b_webb(k):
    return _from_rule(k, 2, lambda x, y: (max(x, y) + 1) % k)


def _b_dual_discriminator(k):
    return _from_rule(k, 3, lambda a, b, c: a if a == b else c)


def _b_discriminator(k):
    return _from_rule(k, 3, lambda a, b, c: c if a == b else a)


def _b_pixley(k):
    def rule(x, y, z):
        if y == z:
            return x
        if x == y:
            return z
        return x

    return _from_rule(k, 3, rule)


def _b_ell(k):
    """The k-ary semiprojection: last argument if the arguments cover the
    whole domain, first argument otherwise."""
    if k < 3:
        raise BadParams("ell needs k >= 3")

    def rule(*args):
        return args[-1] if len(set(args)) == k else args[0]

    return _from_rule(k, k, rule)


def _b_switching(k):
    def rule(a, b, c):
        if a == b:
            return c
        if a == c:
            return b
        if b == c:
            return a
        return a

    return _from_rule(k, 3, rule)


def _b_s_rho(rho):
    """s_rho(b_1..b_k) = b_k when the arguments are pairwise distinct and
    (b_1, b_k) is in rho, else b_1.  rho must be a binary relation."""
    if rho.arity != 2:
        raise BadParams("s_rho needs a binary relation")
    k = rho.k
    pairs = set(rho.tuples)

    def rule(*args):
        if len(set(args)) == k and (args[0], args[-1]) in pairs:
            return args[-1]
        return args[0]

    return _from_rule(k, k, rule)


def _b_ternary_sum(d=1, p=2):
    if p != 2:
        raise BadParams("ternary_sum is the elementary abelian 2-group sum")
    k = 2**d
    return _from_rule(k, 3, lambda x, y, z: x ^ y ^ z)


def _b_affine_maltsev(p, d=1):
    """x1 - x2 + x3 computed digit-wise over Z_p^d (base-p digits,
    most significant digit first)."""
    k = p**d

    def rule(x, y, z):
        xd = index_to_tuple(x, p, d)
        yd = index_to_tuple(y, p, d)
        zd = index_to_tuple(z, p, d)
        return tuple_to_index(
            tuple((a - b + c) % p for a, b, c in zip(xd, yd, zd)), p
        )

    return _from_rule(k, 3, rule)


def _b_p_cyclic(p):
    k = p * p
    return _from_rule(k, 2, lambda x, y: ((1 - p) * x + p * y) % k)


def _b_rect_band_z6():
    return _from_rule(6, 2, lambda x, y: (3 * x + 4 * y) % 6)


_CATALOG = {
    "and": _b_and,
    "or": _b_or,
    "not": _b_not,
    "const": _b_const,
    "cycle": _b_cycle,
    "max": _b_max,
    "min": _b_min,
    "median": _b_median,
    "webb": _b_webb,
    "dual_discriminator": _b_dual_discriminator,
    "discriminator": _b_discriminator,
    "pixley": _b_pixley,
    "ell": _b_ell,
    "switching": _b_switching,
    "s_rho": _b_s_rho,
    "ternary_sum": _b_ternary_sum,
    "affine_maltsev": _b_affine_maltsev,
    "p_cyclic": _b_p_cyclic,
    "rect_band_z6": _b_rect_band_z6,
}
