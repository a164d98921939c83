"""Numba kernels for canonical labelling, class generation and colouring scans.

Graphs live on at most 16 labelled vertices.  A graph is held either as
adjacency bitmask rows (bit j of ``rows[i]`` set iff ij is an edge) or as a
single edge mask over the colexicographic edge indexing of K_n, where the
pair (u, v) with u < v has index C(v,2) + u.  Every kernel in this module
assumes the edge mask fits in an int64, i.e. n <= 11 (55 edge bits); the
pure-Python layer handles 12..16 via the block interface of ``canon_blocks``.

The canonical form is the labelling that minimizes the block sequence
(b_1, ..., b_{n-1}) lexicographically, where b_i packs the adjacency bits of
the vertex at position i towards positions 0..i-1.  Shifting block i left by
C(i,2) and OR-ing reassembles exactly the colex edge mask, so the canonical
key of a small graph is one integer.  Minimization runs over the labellings
compatible with iterated equitable refinement; the candidate search prunes
with partial block comparison, with stabilizer orbits of the automorphisms
discovered so far, and by aborting a branch as soon as a leaf reproduces the
current best labelling (the mapping between the two leaves is then an
automorphism, so the rest of the branch is a mirror of explored ground).
"""

from __future__ import annotations

import numpy as np
from numba import njit

NMAX = 16
DEPTH = NMAX + 1
GENS_CAP = 64

# TRI[i] = C(i,2); block i occupies edge-mask bits TRI[i] .. TRI[i]+i-1.
TRI = np.array([i * (i - 1) // 2 for i in range(NMAX + 1)], dtype=np.int64)


@njit(cache=True, nogil=True, inline="always")
def _popcount(x):
    x = x - ((x >> 1) & 0x5555555555555555)
    x = (x & 0x3333333333333333) + ((x >> 2) & 0x3333333333333333)
    x = (x + (x >> 4)) & 0x0F0F0F0F0F0F0F0F
    return (x * 0x0101010101010101) >> 56


@njit(cache=True, nogil=True)
def _mask_to_rows(n, mask, rows):
    for i in range(n):
        rows[i] = 0
    e = 0
    for v in range(1, n):
        for u in range(v):
            if (mask >> e) & 1:
                rows[u] |= np.int64(1) << v
                rows[v] |= np.int64(1) << u
            e += 1


@njit(cache=True, nogil=True)
def _refine(n, rows, lab, ptn, cnt):
    """Equitable refinement of the ordered partition (lab, ptn), in place.

    lab maps positions to vertices; ptn[i] == 1 iff positions i and i+1 lie
    in the same cell.  Cells are split by neighbour counts against splitter
    cells taken in position order, sub-cells ordered by count ascending
    (stable), restarting after any split.  The cell structure evolution
    depends only on counts and positions, so it commutes with isomorphisms.
    """
    changed = True
    while changed:
        changed = False
        i = 0
        while i < n:
            j = i
            smask = np.int64(0)
            while True:
                smask |= np.int64(1) << lab[j]
                if ptn[j] == 0:
                    break
                j += 1
            a = 0
            while a < n:
                b = a
                while ptn[b] == 1:
                    b += 1
                if b > a:
                    same = True
                    c0 = _popcount(rows[lab[a]] & smask)
                    cnt[a] = c0
                    for p in range(a + 1, b + 1):
                        cp = _popcount(rows[lab[p]] & smask)
                        cnt[p] = cp
                        if cp != c0:
                            same = False
                    if not same:
                        for p in range(a + 1, b + 1):
                            cv = cnt[p]
                            vv = lab[p]
                            q = p - 1
                            while q >= a and cnt[q] > cv:
                                cnt[q + 1] = cnt[q]
                                lab[q + 1] = lab[q]
                                q -= 1
                            cnt[q + 1] = cv
                            lab[q + 1] = vv
                        for p in range(a, b):
                            if cnt[p] != cnt[p + 1]:
                                ptn[p] = 0
                        changed = True
                a = b + 1
            if changed:
                break
            i = j + 1


@njit(cache=True, nogil=True, inline="always")
def _block_at(rows, lab, i):
    b = np.int64(0)
    r = rows[lab[i]]
    for j in range(i):
        if (r >> lab[j]) & 1:
            b |= np.int64(1) << j
    return b


@njit(cache=True, nogil=True, inline="always")
def _uf_find(uf, x):
    while uf[x] != x:
        uf[x] = uf[uf[x]]
        x = uf[x]
    return x


@njit(cache=True, nogil=True)
def _canon(n, rows, lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
           cnt, uf, gens, best_blocks, best_lab, out_blocks, out_lab):
    """Canonical block sequence and labelling of the graph given by rows.

    out_blocks[i] receives block i of the canonical form, out_lab[i] the
    original vertex placed at canonical position i.  The stack arrays are
    caller-provided scratch so tight loops can reuse them.
    """
    for i in range(n):
        lab_st[0, i] = i
        ptn_st[0, i] = 1
    ptn_st[0, n - 1] = 0
    _refine(n, rows, lab_st[0], ptn_st[0], cnt)
    ngens = 0
    best_leaf = False
    sp = 0
    while sp < n and ptn_st[0, sp] == 0:
        sp += 1
    for i in range(sp):
        best_blocks[i] = _block_at(rows, lab_st[0], i)
    best_len = sp
    sp_st[0] = sp
    if sp == n:
        for i in range(n):
            out_blocks[i] = best_blocks[i]
            out_lab[i] = lab_st[0, i]
        return
    ce = sp
    while ptn_st[0, ce] == 1:
        ce += 1
    m = 0
    for p in range(sp, ce + 1):
        cand_st[0, m] = lab_st[0, p]
        m += 1
    for p in range(1, m):
        vv = cand_st[0, p]
        q = p - 1
        while q >= 0 and cand_st[0, q] > vv:
            cand_st[0, q + 1] = cand_st[0, q]
            q -= 1
        cand_st[0, q + 1] = vv
    cnum_st[0] = m
    cidx_st[0] = 0

    d = 0
    while d >= 0:
        if cidx_st[d] >= cnum_st[d]:
            d -= 1
            continue
        ci = cidx_st[d]
        v = cand_st[d, ci]
        cidx_st[d] += 1
        if ci > 0 and ngens > 0:
            # skip v if an automorphism fixing this node's prefix maps it
            # onto an earlier candidate (stabilizer orbit pruning)
            for i in range(n):
                uf[i] = i
            usable = False
            for g in range(ngens):
                fixes = True
                for p in range(sp_st[d]):
                    vv = lab_st[d, p]
                    if gens[g, vv] != vv:
                        fixes = False
                        break
                if fixes:
                    usable = True
                    for x in range(n):
                        rx = _uf_find(uf, x)
                        ry = _uf_find(uf, gens[g, x])
                        if rx != ry:
                            uf[rx] = ry
            if usable:
                rv = _uf_find(uf, v)
                skip = False
                for e in range(ci):
                    if _uf_find(uf, cand_st[d, e]) == rv:
                        skip = True
                        break
                if skip:
                    continue
        nd = d + 1
        for i in range(n):
            lab_st[nd, i] = lab_st[d, i]
            ptn_st[nd, i] = ptn_st[d, i]
        pos = sp_st[d]
        q = pos
        while lab_st[nd, q] != v:
            q += 1
        while q > pos:
            lab_st[nd, q] = lab_st[nd, q - 1]
            q -= 1
        lab_st[nd, pos] = v
        ptn_st[nd, pos] = 0
        _refine(n, rows, lab_st[nd], ptn_st[nd], cnt)
        sp = pos + 1
        while sp < n and ptn_st[nd, sp] == 0:
            sp += 1
        pruned = False
        for i in range(pos, sp):
            b = _block_at(rows, lab_st[nd], i)
            if i >= best_len:
                best_blocks[i] = b
                best_len = i + 1
                best_leaf = False
            elif b > best_blocks[i]:
                pruned = True
                break
            elif b < best_blocks[i]:
                best_blocks[i] = b
                best_len = i + 1
                best_leaf = False
        if pruned:
            continue
        if sp == n:
            if best_leaf:
                # equal leaf: the position-wise vertex mapping between the
                # stored best leaf and this one is an automorphism
                dpos = -1
                for i in range(n):
                    if best_lab[i] != lab_st[nd, i]:
                        dpos = i
                        break
                if dpos >= 0:
                    if ngens < GENS_CAP:
                        for i in range(n):
                            gens[ngens, best_lab[i]] = lab_st[nd, i]
                        ngens += 1
                    # the rest of the branch that diverged at dpos mirrors
                    # the already-explored branch it maps onto: drop back
                    while d >= 0 and sp_st[d] != dpos:
                        d -= 1
            else:
                for i in range(n):
                    best_lab[i] = lab_st[nd, i]
                best_leaf = True
            continue
        sp_st[nd] = sp
        ce = sp
        while ptn_st[nd, ce] == 1:
            ce += 1
        m = 0
        for p in range(sp, ce + 1):
            cand_st[nd, m] = lab_st[nd, p]
            m += 1
        for p in range(1, m):
            vv = cand_st[nd, p]
            q = p - 1
            while q >= 0 and cand_st[nd, q] > vv:
                cand_st[nd, q + 1] = cand_st[nd, q]
                q -= 1
            cand_st[nd, q + 1] = vv
        cnum_st[nd] = m
        cidx_st[nd] = 0
        d = nd

    for i in range(n):
        out_blocks[i] = best_blocks[i]
        out_lab[i] = best_lab[i]


@njit(cache=True, nogil=True)
def _alloc_ws():
    lab_st = np.empty((DEPTH, NMAX), np.int64)
    ptn_st = np.empty((DEPTH, NMAX), np.int64)
    sp_st = np.empty(DEPTH, np.int64)
    cand_st = np.empty((DEPTH, NMAX), np.int64)
    cnum_st = np.empty(DEPTH, np.int64)
    cidx_st = np.empty(DEPTH, np.int64)
    cnt = np.empty(NMAX, np.int64)
    uf = np.empty(NMAX, np.int64)
    gens = np.empty((GENS_CAP, NMAX), np.int64)
    best_blocks = np.empty(NMAX, np.int64)
    best_lab = np.empty(NMAX, np.int64)
    return (lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
            cnt, uf, gens, best_blocks, best_lab)


@njit(cache=True, nogil=True)
def canon_blocks(n, rows, out_blocks, out_lab):
    """One-shot canonical labelling (allocates its own scratch)."""
    (lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
     cnt, uf, gens, best_blocks, best_lab) = _alloc_ws()
    _canon(n, rows, lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
           cnt, uf, gens, best_blocks, best_lab, out_blocks, out_lab)


@njit(cache=True, nogil=True)
def canon_key_batch(n, masks, out_keys):
    """Canonical colex-mask key for every edge mask in ``masks`` (n <= 11)."""
    (lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
     cnt, uf, gens, best_blocks, best_lab) = _alloc_ws()
    rows = np.empty(NMAX, np.int64)
    blocks = np.empty(NMAX, np.int64)
    clab = np.empty(NMAX, np.int64)
    for ii in range(masks.shape[0]):
        _mask_to_rows(n, masks[ii], rows)
        _canon(n, rows, lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
               cnt, uf, gens, best_blocks, best_lab, blocks, clab)
        key = np.int64(0)
        for i in range(1, n):
            key |= blocks[i] << TRI[i]
        out_keys[ii] = key


@njit(cache=True, nogil=True)
def expand_chunk(k, parent_masks, out):
    """Canonical augmentation step: k-vertex parents to (k+1)-vertex children.

    parent_masks must be canonical colex masks of pairwise non-isomorphic
    graphs.  For each parent, all 2^k one-vertex extensions are canonized,
    deduplicated by canonical key, and a child is accepted iff deleting the
    vertex at the last canonical position gives back the parent's key; since
    that deletion rule is labelling-invariant, each (k+1)-vertex class is
    accepted from exactly one parent class and once there.  Accepted children
    are written to ``out`` as canonical masks, per parent in increasing key
    order.  Returns the count written.
    """
    n = k + 1
    (lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
     cnt, uf, gens, best_blocks, best_lab) = _alloc_ws()
    blocks = np.empty(NMAX, np.int64)
    clab = np.empty(NMAX, np.int64)
    prows = np.empty(NMAX, np.int64)
    crows = np.empty(NMAX, np.int64)
    drows = np.empty(NMAX, np.int64)
    nsub = 1 << k
    keys = np.empty(nsub, np.int64)
    zs = np.empty(nsub, np.int64)
    nout = 0
    for pi in range(parent_masks.shape[0]):
        pmask = parent_masks[pi]
        _mask_to_rows(k, pmask, prows)
        for s in range(nsub):
            for i in range(k):
                crows[i] = prows[i]
                if (s >> i) & 1:
                    crows[i] |= np.int64(1) << k
            crows[k] = s
            _canon(n, crows, lab_st, ptn_st, sp_st, cand_st, cnum_st, cidx_st,
                   cnt, uf, gens, best_blocks, best_lab, blocks, clab)
            key = np.int64(0)
            for i in range(1, n):
                key |= blocks[i] << TRI[i]
            keys[s] = key
            zs[s] = clab[n - 1]
        order = np.argsort(keys)
        prev = np.int64(-1)
        for oi in range(nsub):
            s = order[oi]
            key = keys[s]
            if key == prev:
                continue
            prev = key
            z = zs[s]
            if z == k:
                ok = True
            else:
                for i in range(k):
                    crows[i] = prows[i]
                    if (s >> i) & 1:
                        crows[i] |= np.int64(1) << k
                crows[k] = s
                lowm = (np.int64(1) << z) - 1
                j = 0
                for u in range(n):
                    if u == z:
                        continue
                    r = crows[u]
                    drows[j] = (r & lowm) | ((r >> (z + 1)) << z)
                    j += 1
                _canon(k, drows, lab_st, ptn_st, sp_st, cand_st, cnum_st,
                       cidx_st, cnt, uf, gens, best_blocks, best_lab,
                       blocks, clab)
                dkey = np.int64(0)
                for i in range(1, k):
                    dkey |= blocks[i] << TRI[i]
                ok = dkey == pmask
            if ok:
                out[nout] = key
                nout += 1
    return nout


@njit(cache=True, nogil=True, inline="always")
def _avoids(m, copies, mode, lo, hi, emax):
    """mode 0: no copy carries tone lo or hi (no balanced copy);
    mode 1: tones lo and hi are not both present (strong balance missing);
    mode 2: some tone in 0..emax is missing (not omnitonal)."""
    if mode == 0:
        for ci in range(copies.shape[0]):
            t = _popcount(m & copies[ci])
            if t == lo or t == hi:
                return False
        return True
    elif mode == 1:
        haslo = False
        hashi = False
        for ci in range(copies.shape[0]):
            t = _popcount(m & copies[ci])
            if t == lo:
                if hashi:
                    return False
                haslo = True
            elif t == hi:
                if haslo:
                    return False
                hashi = True
        return True
    else:
        found = np.int64(0)
        full = (np.int64(1) << (emax + 1)) - 1
        for ci in range(copies.shape[0]):
            t = _popcount(m & copies[ci])
            found |= np.int64(1) << t
            if found == full:
                return False
        return True


@njit(cache=True, nogil=True)
def scan_best_avoiding(masks, copies, nedges, mode, lo, hi, emax):
    """Max of min{|R|,|B|} over red masks avoiding the target condition.

    Returns (best, idx) where idx is the first mask in this chunk attaining
    best, or (-1, -1) when nothing avoids.
    """
    best = np.int64(-1)
    bidx = np.int64(-1)
    for ii in range(masks.shape[0]):
        m = masks[ii]
        r = _popcount(m)
        mn = nedges - r
        if r < mn:
            mn = r
        if mn <= best:
            continue
        if _avoids(m, copies, mode, lo, hi, emax):
            best = mn
            bidx = ii
    return best, bidx


@njit(cache=True, nogil=True)
def first_non_avoiding_min_above(masks, copies, nedges, mode, lo, hi, emax,
                                 floor):
    """Index of the first mask with min{|R|,|B|} > floor that fails to avoid
    -- i.e. a counterexample to 'value == floor' maximality -- else -1.
    Used with swapped roles for soundness sampling: returns the first mask
    with min > floor that AVOIDS the target (which would disprove the
    threshold), else -1."""
    for ii in range(masks.shape[0]):
        m = masks[ii]
        r = _popcount(m)
        mn = nedges - r
        if r < mn:
            mn = r
        if mn <= floor:
            continue
        if _avoids(m, copies, mode, lo, hi, emax):
            return ii
    return -1


@njit(cache=True, nogil=True)
def scan_turan(masks, copies):
    """Max edge count over masks containing no copy; returns (best, idx)."""
    best = np.int64(-1)
    bidx = np.int64(-1)
    for ii in range(masks.shape[0]):
        m = masks[ii]
        e = _popcount(m)
        if e <= best:
            continue
        free = True
        for ci in range(copies.shape[0]):
            c = copies[ci]
            if m & c == c:
                free = False
                break
        if free:
            best = e
            bidx = ii
    return best, bidx


@njit(cache=True, nogil=True)
def scan_ramsey_witness(masks, copies_g, copies_h, full):
    """First mask whose graph misses g and whose complement misses h; -1 if
    every mask is forced."""
    for ii in range(masks.shape[0]):
        m = masks[ii]
        found = False
        for ci in range(copies_g.shape[0]):
            c = copies_g[ci]
            if m & c == c:
                found = True
                break
        if found:
            continue
        comp = full & ~m
        found = False
        for ci in range(copies_h.shape[0]):
            c = copies_h[ci]
            if comp & c == c:
                found = True
                break
        if not found:
            return ii
    return -1
