"""Numba kernels for the stratified closure loop.

Members of the arity-n part are rows of an int8 array of length L = k**n.
Deduplication uses an open-addressing hash table over the row contents, so
no packing limit applies to L.  The kernel runs one generation round at a
time; the Python orchestrator in closure.py loops rounds, which keeps the
hot loops compiled while letting callers inspect new members between
rounds.

Round statuses:
    0  round completed normally
    1  member count reached the capacity limit (cap hit)
    2  part reached every possible table (full)
    3  the requested target table was produced
"""

import numpy as np
from numba import njit

STATUS_OK = 0
STATUS_CAP = 1
STATUS_FULL = 2
STATUS_TARGET = 3


@njit(cache=True)
def _insert_row(members, count, slots, mask, L):
    """Insert members[count] if it is new.  Returns the new count."""
    h = np.uint64(1469598103934665603)
    for c in range(L):
        h = (h ^ np.uint64(members[count, c])) * np.uint64(1099511628211)
    i = h & mask
    while True:
        s = slots[i]
        if s < 0:
            slots[i] = count
            return count + 1
        eq = True
        for c in range(L):
            if members[s, c] != members[count, c]:
                eq = False
                break
        if eq:
            return count
        i = (i + np.uint64(1)) & mask


@njit(cache=True)
def closure_round(
    k,
    L,
    gen_tables,
    gen_offsets,
    gen_arities,
    members,
    count,
    slots,
    mask,
    old,
    capacity,
    total_full,
    target,
    has_target,
):
    """Apply every generator to every argument tuple over members[0:count]
    that touches at least one member with index >= old.  Returns
    (new_count, status)."""
    cur = count
    for gi in range(gen_arities.shape[0]):
        a = gen_arities[gi]
        off = gen_offsets[gi]
        if a == 1:
            for i in range(old, cur):
                if count >= capacity:
                    return count, STATUS_CAP
                for c in range(L):
                    members[count, c] = gen_tables[off + members[i, c]]
                nc = _insert_row(members, count, slots, mask, L)
                if nc > count:
                    count = nc
                    if has_target:
                        eq = True
                        for c in range(L):
                            if members[count - 1, c] != target[c]:
                                eq = False
                                break
                        if eq:
                            return count, STATUS_TARGET
                    if count == total_full:
                        return count, STATUS_FULL
        elif a == 2:
            for i in range(cur):
                j0 = old if i < old else 0
                for j in range(j0, cur):
                    if count >= capacity:
                        return count, STATUS_CAP
                    for c in range(L):
                        members[count, c] = gen_tables[
                            off + members[i, c] * k + members[j, c]
                        ]
                    nc = _insert_row(members, count, slots, mask, L)
                    if nc > count:
                        count = nc
                        if has_target:
                            eq = True
                            for c in range(L):
                                if members[count - 1, c] != target[c]:
                                    eq = False
                                    break
                            if eq:
                                return count, STATUS_TARGET
                        if count == total_full:
                            return count, STATUS_FULL
        elif a == 3:
            for i in range(cur):
                for j in range(cur):
                    l0 = old if (i < old and j < old) else 0
                    for l in range(l0, cur):
                        if count >= capacity:
                            return count, STATUS_CAP
                        for c in range(L):
                            members[count, c] = gen_tables[
                                off
                                + (members[i, c] * k + members[j, c]) * k
                                + members[l, c]
                            ]
                        nc = _insert_row(members, count, slots, mask, L)
                        if nc > count:
                            count = nc
                            if has_target:
                                eq = True
                                for c in range(L):
                                    if members[count - 1, c] != target[c]:
                                        eq = False
                                        break
                                if eq:
                                    return count, STATUS_TARGET
                            if count == total_full:
                                return count, STATUS_FULL
        else:
            # arity 4
            for i in range(cur):
                for j in range(cur):
                    for l in range(cur):
                        m0 = old if (i < old and j < old and l < old) else 0
                        for m in range(m0, cur):
                            if count >= capacity:
                                return count, STATUS_CAP
                            for c in range(L):
                                members[count, c] = gen_tables[
                                    off
                                    + (
                                        (members[i, c] * k + members[j, c]) * k
                                        + members[l, c]
                                    )
                                    * k
                                    + members[m, c]
                                ]
                            nc = _insert_row(members, count, slots, mask, L)
                            if nc > count:
                                count = nc
                                if has_target:
                                    eq = True
                                    for c in range(L):
                                        if members[count - 1, c] != target[c]:
                                            eq = False
                                            break
                                    if eq:
                                        return count, STATUS_TARGET
                                if count == total_full:
                                    return count, STATUS_FULL
    return count, STATUS_OK


def seed_state(k, n, capacity):
    """Allocate the member array and hash table, seeded with the n
    projections (in index order)."""
    L = k**n
    capacity = int(capacity)
    members = np.zeros((capacity + 1, L), dtype=np.int8)
    hcap = 1
    while hcap < 4 * (capacity + 1):
        hcap *= 2
    slots = np.full(hcap, -1, dtype=np.int64)
    mask = np.uint64(hcap - 1)
    count = 0
    for i in range(n):
        stride = k ** (n - 1 - i)
        for idx in range(L):
            members[count, idx] = (idx // stride) % k
        count = _insert_row(members, count, slots, mask, L)
    return members, slots, mask, count
