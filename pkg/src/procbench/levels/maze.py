"""Seeded perfect-maze generation via randomized Kruskal."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..rng import TAG_ENTITIES, TAG_LAYOUT, derive_stream
from ..tiles import Cell

DIM_MIN = 3
DIM_MAX = 25


@dataclass(frozen=True)
class MazeLevel:
    """A dim x dim grid maze whose corridors form a spanning tree.

    ``cells`` is row-major with row 0 at the top; coordinates are
    (row, col) pairs.
    """

    seed: int
    dim: int
    cells: bytes
    agent_start: tuple[int, int]
    goal: tuple[int, int]

    game = "mazes"

    def get(self, r: int, c: int) -> int:
        return self.cells[r * self.dim + c]

    def is_corridor(self, r: int, c: int) -> bool:
        return (
            0 <= r < self.dim
            and 0 <= c < self.dim
            and self.cells[r * self.dim + c] != Cell.WALL
        )

    def corridor_cells(self) -> list[tuple[int, int]]:
        d = self.dim
        return [
            (i // d, i % d) for i, v in enumerate(self.cells) if v != Cell.WALL
        ]


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        p = self.parent
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def generate_maze(seed: int) -> MazeLevel:
    """Kruskal over the node lattice at even-indexed cells.

    dim is the first layout draw; nodes sit at (2i, 2j); the edge list is
    built row-major (right edge before down edge) and Fisher-Yates
    shuffled with the layout stream.  Accepted edges carve the wall cell
    between their endpoints.  Goal and start are then drawn uniformly
    (goal first) from the row-major corridor list via the entities
    stream, redrawing until distinct.
    """
    layout = derive_stream(seed, TAG_LAYOUT)
    dim = layout.uniform_int(DIM_MIN, DIM_MAX)
    n = (dim + 1) // 2

    cells = bytearray(dim * dim)  # all WALL
    for i in range(n):
        for j in range(n):
            cells[(2 * i) * dim + (2 * j)] = Cell.EMPTY

    edges = []
    for i in range(n):
        for j in range(n):
            if j + 1 < n:
                edges.append((i, j, i, j + 1))
            if i + 1 < n:
                edges.append((i, j, i + 1, j))
    layout.shuffle(edges)

    uf = _UnionFind(n * n)
    for i0, j0, i1, j1 in edges:
        if uf.union(i0 * n + j0, i1 * n + j1):
            wr = i0 + i1  # midpoint of (2*i0, 2*i1)
            wc = j0 + j1
            cells[wr * dim + wc] = Cell.EMPTY

    corridor = [
        (i // dim, i % dim) for i, v in enumerate(cells) if v != Cell.WALL
    ]
    entities = derive_stream(seed, TAG_ENTITIES)
    goal = corridor[entities.uniform_int(0, len(corridor) - 1)]
    start = goal
    while start == goal:
        start = corridor[entities.uniform_int(0, len(corridor) - 1)]
    cells[goal[0] * dim + goal[1]] = Cell.GOAL

    return MazeLevel(
        seed=seed, dim=dim, cells=bytes(cells), agent_start=start, goal=goal
    )


def shortest_path_length(
    level: MazeLevel, src: tuple[int, int], dst: tuple[int, int]
) -> int:
    """BFS distance in moves between two corridor cells.

    The corridor graph is a tree, so this is also the unique path length.
    """
    for name, cell in (("src", src), ("dst", dst)):
        if not level.is_corridor(*cell):
            raise ValueError(f"{name} cell {cell} is not a corridor cell")
    if src == dst:
        return 0
    dist = {src: 0}
    queue = deque([src])
    while queue:
        r, c = queue.popleft()
        d = dist[(r, c)] + 1
        for nr, nc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if (nr, nc) in dist or not level.is_corridor(nr, nc):
                continue
            if (nr, nc) == dst:
                return d
            dist[(nr, nc)] = d
            queue.append((nr, nc))
    raise ValueError(f"no corridor path from {src} to {dst}")
