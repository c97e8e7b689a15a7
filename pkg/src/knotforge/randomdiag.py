"""Seeded random diagrams: closures of random braid words, optionally
decorated with random moves."""

from __future__ import annotations

import random

from .diagram import Diagram, _UnionFind


def braid_closure(word: list[int], strands: int) -> Diagram:
    """Closure of a braid word; generator +i / -i crosses positions i and i+1 (1-based)."""
    label = list(range(1, strands + 1))
    start = list(label)
    nxt = strands + 1
    xs = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < strands - 1:
            raise ValueError(f"generator {g} out of range for {strands} strands")
        x, y = label[i], label[i + 1]
        new_l, new_r = nxt, nxt + 1
        nxt += 2
        if g > 0:
            xs.append([y, new_r, new_l, x, 1])
        else:
            xs.append([x, y, new_r, new_l, -1])
        label[i], label[i + 1] = new_l, new_r
    uf = _UnionFind()
    for a, b in zip(start, label):
        uf.union(a, b)
    used = {uf.find(e) for x in xs for e in x[:4]}
    loops = len({uf.find(a) for a in start} - used)
    crossings = [[uf.find(e) for e in x[:4]] + [x[4]] for x in xs]
    return Diagram(crossings, loops).relabeled() if crossings else Diagram.unlink(loops)


def random_braid_diagram(rng: random.Random, max_crossings: int = 8, max_strands: int = 4) -> Diagram:
    strands = rng.randint(2, max_strands)
    n = rng.randint(1, max_crossings)
    word = [rng.randint(1, strands - 1) * rng.choice((1, -1)) for _ in range(n)]
    return braid_closure(word, strands)


def random_diagram(seed: int, max_crossings: int = 8, moves: int = 0) -> Diagram:
    """Seeded random diagram; ``moves`` random R-moves are applied afterwards
    without exceeding ``max_crossings + 2`` crossings."""
    from .moves import KINDS, apply_move, find_moves

    rng = random.Random(seed)
    d = random_braid_diagram(rng, max_crossings)
    for _ in range(moves):
        options = []
        for kind in KINDS:
            options.extend(find_moves(d, kind))
        if len(d) + 2 <= max_crossings + 2:
            options.extend(find_moves(d, "R1", "increase"))
            options.extend(find_moves(d, "R2", "increase"))
        if not options:
            break
        d = apply_move(d, rng.choice(options))
    return d
