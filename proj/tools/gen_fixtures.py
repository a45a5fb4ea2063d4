#!/usr/bin/env python3
"""Regenerates the bundled maps and scenario files under data/.

Output is deterministic: rerunning produces byte-identical files.
"""

import heapq
import math
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "data"

SCENARIOS_PER_MAP = 5
ENTRIES_PER_SCENARIO = 20


def write_map(path, rows):
    text = "type octile\nheight {}\nwidth {}\nmap\n".format(len(rows), len(rows[0]))
    text += "".join(r + "\n" for r in rows)
    path.write_text(text)


def empty_map(w, h):
    return ["." * w for _ in range(h)]


def random_map(w, h, density, seed):
    rng = random.Random(seed)
    cells = [["." for _ in range(w)] for _ in range(h)]
    blocked = rng.sample(range(w * h), round(density * w * h))
    for c in blocked:
        cells[c // w][c % w] = "@"
    return ["".join(r) for r in cells]


def passable(rows, x, y):
    return 0 <= y < len(rows) and 0 <= x < len(rows[0]) and rows[y][x] in ".G"


def octile_distances(rows, sx, sy):
    """8-connected distances without corner cutting."""
    dist = {(sx, sy): 0.0}
    heap = [(0.0, sx, sy)]
    while heap:
        d, x, y = heapq.heappop(heap)
        if d > dist[(x, y)]:
            continue
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                if not dx and not dy:
                    continue
                nx, ny = x + dx, y + dy
                if not passable(rows, nx, ny):
                    continue
                if dx and dy and not (passable(rows, x + dx, y) and passable(rows, x, y + dy)):
                    continue
                nd = d + (math.sqrt(2) if dx and dy else 1.0)
                if nd < dist.get((nx, ny), math.inf):
                    dist[(nx, ny)] = nd
                    heapq.heappush(heap, (nd, nx, ny))
    return dist


def largest_component(rows):
    seen, best = set(), []
    for y in range(len(rows)):
        for x in range(len(rows[0])):
            if passable(rows, x, y) and (x, y) not in seen:
                comp = list(octile_distances(rows, x, y).keys())
                seen.update(comp)
                if len(comp) > len(best):
                    best = comp
    return sorted(best, key=lambda c: (c[1], c[0]))


def write_scen(path, map_name, rows, seed):
    rng = random.Random(seed)
    cells = largest_component(rows)
    starts = rng.sample(cells, ENTRIES_PER_SCENARIO)
    goals = rng.sample(cells, ENTRIES_PER_SCENARIO)
    lines = ["version 1"]
    for i, (s, g) in enumerate(zip(starts, goals)):
        if s == g:
            g = next(c for c in cells if c not in goals and c != s)
        d = octile_distances(rows, *s)[g]
        lines.append(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.8f}".format(
                i // 10, map_name, len(rows[0]), len(rows), s[0], s[1], g[0], g[1], d
            )
        )
    path.write_text("\n".join(lines) + "\n")


def main():
    (DATA / "maps").mkdir(parents=True, exist_ok=True)
    (DATA / "scen").mkdir(parents=True, exist_ok=True)
    maps = {
        "empty-16-16.map": empty_map(16, 16),
        "random-32-32-10.map": random_map(32, 32, 0.10, seed=6410),
    }
    for name, rows in maps.items():
        write_map(DATA / "maps" / name, rows)
        stem = name[: -len(".map")]
        for i in range(1, SCENARIOS_PER_MAP + 1):
            write_scen(DATA / "scen" / "{}-random-{}.scen".format(stem, i), name, rows, seed=hash_seed(stem, i))


def hash_seed(stem, i):
    return sum(ord(c) for c in stem) * 1000 + i


if __name__ == "__main__":
    main()
