"""Deterministic Schreier-Sims stabilizer chains over numpy image arrays.

Permutations are 0-based int32 arrays acting as ``x -> g[x]``; composition
``g o h`` is the gather ``g[h]``.  Each level keeps its inverse transversal
as rows of an (n x n) lookup table, so sifting reduces whole batches of
Schreier generators at once: one chain step multiplies every pending row by
the inverse representative selected by its own image of the base point.

Completion strategy:

* orbits are extended incrementally and existing transversal representatives
  are never replaced, so certified Schreier generators stay certified;
* every (orbit point, generator) pair is processed exactly once per level,
  tracked by a processed-rectangle marker as both lists grow;
* the whole pending batch is sifted together; non-identity residues are
  registered one at a time (in deterministic order), each immediately folded
  into the deeper transversals, and the remaining residues re-sifted;
* the outer driver loops deepest-to-shallowest until a pass adds nothing.

At the fixpoint every Schreier generator of every level lies in the group
generated by the chain below it, so by Schreier's lemma the chain is exact
and the order is the product of the orbit sizes.  Full symmetric groups up
to degree around 150 complete in seconds.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


class _Level:
    __slots__ = ("point", "orbit_list", "fwd", "table", "in_orbit", "applicable",
                 "gens_upto", "rect")

    def __init__(self, point: int, degree: int, idarr: np.ndarray):
        self.point = point
        self.orbit_list = [point]
        self.fwd = {point: idarr}
        self.table = np.zeros((degree, degree), dtype=np.int32)
        self.table[point] = idarr
        self.in_orbit = np.zeros(degree, dtype=bool)
        self.in_orbit[point] = True
        self.applicable: list[int] = []
        self.gens_upto = 0
        self.rect = (0, 0)


def chain_order(degree: int, generators: Sequence[Sequence[int]]) -> int:
    """Order of the group generated by 0-based image arrays."""
    idarr = np.arange(degree, dtype=np.int32)
    sgens: list[np.ndarray] = []
    sinvs: list[np.ndarray] = []
    depths: list[int] = []
    base: list[int] = []
    levels: list[_Level] = []

    def register(arr: np.ndarray) -> int:
        """Record a strong generator (duplicates skipped); returns its depth."""
        depth = 0
        while depth < len(base) and arr[base[depth]] == base[depth]:
            depth += 1
        if any(np.array_equal(arr, g) for g in sgens):
            return depth
        if depth == len(base):
            moved = int(np.nonzero(arr != idarr)[0][0])
            base.append(moved)
            levels.append(_Level(moved, degree, idarr))
        inv = np.empty_like(arr)
        inv[arr] = idarr
        sgens.append(arr)
        sinvs.append(inv)
        depths.append(depth)
        return depth

    for raw in generators:
        arr = np.asarray(raw, dtype=np.int32)
        if len(arr) != degree:
            raise ValueError("generator degree mismatch")
        if not np.array_equal(arr, idarr) and not any(
            np.array_equal(arr, g) for g in sgens
        ):
            register(arr)
    if not sgens:
        return 1

    def extend(i: int) -> None:
        """Fold newly registered generators into level i's orbit."""
        lv = levels[i]
        new = [gi for gi in range(lv.gens_upto, len(sgens)) if depths[gi] >= i]
        lv.gens_upto = len(sgens)
        if not new:
            return

        def grow(p: int, gi: int) -> None:
            q = int(sgens[gi][p])
            if not lv.in_orbit[q]:
                lv.fwd[q] = sgens[gi][lv.fwd[p]]
                lv.table[q] = lv.table[p][sinvs[gi]]
                lv.in_orbit[q] = True
                lv.orbit_list.append(q)
                queue.append(q)

        queue: list[int] = []
        for p in list(lv.orbit_list):
            for gi in new:
                grow(p, gi)
        lv.applicable.extend(new)
        while queue:
            p = queue.pop()
            for gi in lv.applicable:
                grow(p, gi)

    def batch_sift(rows: np.ndarray, start: int) -> np.ndarray:
        """Reduce every row through the chain from the given level (in place)."""
        for k in range(start, len(base)):
            lv = levels[k]
            b = base[k]
            ps = rows[:, b]
            todo = np.nonzero(lv.in_orbit[ps] & (ps != b))[0]
            if todo.size:
                # row r becomes uinv_{p_r} o row_r, done as one flat gather
                flat = rows[todo] + ps[todo, None] * np.int32(degree)
                rows[todo] = lv.table.reshape(-1)[flat]
        return rows

    def process(i: int) -> bool:
        """Handle all unprocessed Schreier pairs of level i; True if gens added."""
        lv = levels[i]
        added = False
        while True:
            extend(i)
            n_pts, n_gens = len(lv.orbit_list), len(lv.applicable)
            done_pts, done_gens = lv.rect
            if (done_pts, done_gens) == (n_pts, n_gens):
                return added
            pairs = []
            for pi in range(n_pts):
                for gj in range(done_gens if pi < done_pts else 0, n_gens):
                    pairs.append((pi, gj))
            rows = np.empty((len(pairs), degree), dtype=np.int32)
            for r, (pi, gj) in enumerate(pairs):
                p = lv.orbit_list[pi]
                g = sgens[lv.applicable[gj]]
                q = int(g[p])
                rows[r] = lv.table[q][g[lv.fwd[p]]]
            lv.rect = (n_pts, n_gens)
            block = rows[np.nonzero((rows != idarr).any(axis=1))[0]]
            block = batch_sift(block, i + 1)
            while True:
                nonid = np.nonzero((block != idarr).any(axis=1))[0]
                if nonid.size == 0:
                    break
                depth = register(block[int(nonid[0])].copy())
                for k in range(i + 1, min(depth + 1, len(levels))):
                    extend(k)
                added = True
                block = batch_sift(block[nonid[1:]], i + 1)

    while True:
        changed = False
        for i in range(len(base) - 1, -1, -1):
            if process(i):
                changed = True
        if not changed:
            break

    order = 1
    for i in range(len(base)):
        extend(i)
        order *= len(levels[i].orbit_list)
    return order
