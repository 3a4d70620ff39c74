"""Partition refinement inner loop, compiled with numba when available.

The loop is written once as a plain function over preallocated numpy
arrays and wrapped with @njit on import.  Engine choice:

  * env var DLBISIM_NUMBA=0 (or "false"/"off"/"no") forces the pure
    Python path, anything else prefers numba when it is importable;
  * set_engine("numba" | "numpy" | "auto") overrides at runtime.

Both paths execute the same statements, so results are identical by
construction; the test suite still compares them on random inputs.

Splitting discipline.  A worklist entry is a (block, splitter role)
pair.  Extracting one counts, for every element x, the edges x leads
into the block along that role.  With counting enabled the touched
elements of each affected block are regrouped by exact count (ascending,
ties on element id), the zero-count remainder keeps the parent id, and
the classic "skip one maximal sub-block" worklist economy applies: it is
sound here because counts are additive under block complement, provided
the initial partition is already stable with respect to the whole
domain (the caller pre-splits by per-role degree).  Without counting the
split is binary (no edge / some edge), complement reasoning is invalid,
so every block is seeded and every sub-block is queued.
"""

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is an install dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


def _refine_loop(n, nsr, pred_indptr, pred_indices,
                 block_of, elems, pos, first, last, nblocks0,
                 use_counts, exclude, record,
                 counts, touched, tlist, tb_cnt, tb_start, tb_fill, affected,
                 sort_keys, queue, in_l,
                 ev_parent, ev_role, ev_yblock, ev_time, ev_sub_start,
                 sub_block, sub_count):
    nblocks = nblocks0
    qhead = 0
    qtail = 0
    nev = 0
    nsub = 0
    ev_sub_start[0] = 0
    base_key = np.int64(n + 1)

    if exclude:
        zmax = 0
        for b in range(1, nblocks0):
            if last[b] - first[b] > last[zmax] - first[zmax]:
                zmax = b
        for b in range(nblocks0):
            if b != zmax:
                for s in range(nsr):
                    queue[qtail] = np.int64(b) * nsr + s
                    qtail += 1
                    in_l[b * nsr + s] = 1
    else:
        for b in range(nblocks0):
            for s in range(nsr):
                queue[qtail] = np.int64(b) * nsr + s
                qtail += 1
                in_l[b * nsr + s] = 1

    t = 0
    while qhead < qtail:
        pair = queue[qhead]
        qhead += 1
        yblk = int(pair // nsr)
        role = int(pair % nsr)
        in_l[pair] = 0
        t += 1

        # counts[x] = number of edges x -> (member of yblk) along role
        nt = 0
        for i in range(first[yblk], last[yblk]):
            y = elems[i]
            for j in range(pred_indptr[role, y], pred_indptr[role, y + 1]):
                x = pred_indices[j]
                if counts[x] == 0:
                    touched[nt] = x
                    nt += 1
                counts[x] += 1
        if nt == 0:
            continue

        # bucket touched elements by their current block
        na = 0
        for i in range(nt):
            b = block_of[touched[i]]
            if tb_cnt[b] == 0:
                affected[na] = b
                na += 1
            tb_cnt[b] += 1
        off = 0
        for k in range(na):
            b = affected[k]
            tb_start[b] = off
            tb_fill[b] = off
            off += tb_cnt[b]
        for i in range(nt):
            x = touched[i]
            b = block_of[x]
            tlist[tb_fill[b]] = x
            tb_fill[b] += 1

        for k in range(na):
            b = affected[k]
            fb = first[b]
            lb = last[b]
            sz = lb - fb
            ntb = tb_cnt[b]
            s0 = tb_start[b]
            tb_cnt[b] = 0

            if use_counts:
                for ii in range(ntb):
                    x = tlist[s0 + ii]
                    sort_keys[ii] = counts[x] * base_key + x
                order = np.argsort(sort_keys[:ntb])
                cmin = sort_keys[order[0]] // base_key
                cmax = sort_keys[order[ntb - 1]] // base_key
                if ntb == sz and cmin == cmax:
                    continue
            else:
                if ntb == sz:
                    continue
                order = np.argsort(tlist[s0:s0 + ntb])

            # move touched elements to the back of the segment, in order
            tpos = lb - ntb
            for oi in range(ntb):
                if use_counts:
                    x = int(sort_keys[order[oi]] % base_key)
                else:
                    x = tlist[s0 + order[oi]]
                cur = pos[x]
                z = elems[tpos]
                elems[tpos] = x
                elems[cur] = z
                pos[x] = tpos
                pos[z] = cur
                tpos += 1

            if record:
                ev_parent[nev] = b
                ev_role[nev] = role
                ev_yblock[nev] = yblk
                ev_time[nev] = t

            nu = sz - ntb
            first_new = nblocks
            residual_used = False
            if nu > 0:
                first[b] = fb
                last[b] = fb + nu
                residual_used = True
                if record:
                    sub_block[nsub] = b
                    sub_count[nsub] = 0
                    nsub += 1
            seg = fb + nu
            ii = 0
            while ii < ntb:
                if use_counts:
                    cnt = sort_keys[order[ii]] // base_key
                    jj = ii
                    while jj < ntb and sort_keys[order[jj]] // base_key == cnt:
                        jj += 1
                else:
                    cnt = 1
                    jj = ntb
                size_c = jj - ii
                if not residual_used:
                    cid = b
                    residual_used = True
                    first[b] = seg
                    last[b] = seg + size_c
                else:
                    cid = nblocks
                    nblocks += 1
                    first[cid] = seg
                    last[cid] = seg + size_c
                    for qq in range(seg, seg + size_c):
                        block_of[elems[qq]] = cid
                if record:
                    sub_block[nsub] = cid
                    sub_count[nsub] = cnt
                    nsub += 1
                seg += size_c
                ii = jj
            if record:
                nev += 1
                ev_sub_start[nev] = nsub

            # worklist update: replace a queued parent by all sub-blocks,
            # otherwise queue all sub-blocks (minus a maximal one when the
            # exclusion economy is sound)
            if exclude:
                zbest = b
                zsize = last[b] - first[b]
                for cid in range(first_new, nblocks):
                    if last[cid] - first[cid] > zsize:
                        zbest = cid
                        zsize = last[cid] - first[cid]
            else:
                zbest = -1
            for s in range(nsr):
                if in_l[b * nsr + s] != 0:
                    for cid in range(first_new, nblocks):
                        queue[qtail] = np.int64(cid) * nsr + s
                        qtail += 1
                        in_l[cid * nsr + s] = 1
                else:
                    if b != zbest:
                        queue[qtail] = np.int64(b) * nsr + s
                        qtail += 1
                        in_l[b * nsr + s] = 1
                    for cid in range(first_new, nblocks):
                        if cid != zbest:
                            queue[qtail] = np.int64(cid) * nsr + s
                            qtail += 1
                            in_l[cid * nsr + s] = 1

        for i in range(nt):
            counts[touched[i]] = 0

    return nblocks, nev, nsub


_refine_loop_jit = njit(cache=True)(_refine_loop) if HAVE_NUMBA else _refine_loop


def _engine_from_env() -> str:
    raw = os.environ.get("DLBISIM_NUMBA", "").strip().lower()
    if raw in {"0", "false", "off", "no"}:
        return "numpy"
    return "numba" if HAVE_NUMBA else "numpy"


_engine = _engine_from_env()


def set_engine(name: str) -> None:
    """Select the refinement engine: "numba", "numpy" or "auto"."""
    global _engine
    if name == "auto":
        _engine = _engine_from_env()
        return
    if name not in ("numba", "numpy"):
        raise ValueError("engine must be numba, numpy or auto, got %r" % name)
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not importable in this environment")
    _engine = name


def active_engine() -> str:
    return _engine


def get_refine_loop(engine: str | None = None):
    engine = engine or _engine
    if engine == "numba":
        if not HAVE_NUMBA:
            raise RuntimeError("numba is not importable in this environment")
        return _refine_loop_jit
    if engine == "numpy":
        return _refine_loop
    raise ValueError("engine must be numba or numpy, got %r" % engine)
