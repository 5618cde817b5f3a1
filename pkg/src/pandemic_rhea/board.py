"""City graph of the board and the map file loader."""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

COLORS: tuple[str, ...] = ("blue", "yellow", "black", "red")
N_COLORS = len(COLORS)
START_CITY_NAME = "Atlanta"


class MapError(ValueError):
    pass


@dataclass(frozen=True)
class CityMap:
    names: tuple[str, ...]
    colors: tuple[int, ...]
    neighbors: tuple[tuple[int, ...], ...]
    checksum: str = ""
    index: dict[str, int] = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.index:
            object.__setattr__(self, "index", {n: i for i, n in enumerate(self.names)})

    @property
    def n_cities(self) -> int:
        return len(self.names)

    def city(self, name: str) -> int:
        try:
            return self.index[name]
        except KeyError:
            raise MapError(f"unknown city {name!r}") from None

    def edges(self) -> list[tuple[int, int]]:
        return [(a, b) for a, nbrs in enumerate(self.neighbors) for b in nbrs if a < b]

    def drive_distances(self) -> tuple[tuple[int, ...], ...]:
        return _all_pairs(self.neighbors)

    def validate(self, standard: bool = True) -> None:
        """Check graph sanity; with ``standard`` also the 48-city/12-per-color layout."""
        n = self.n_cities
        for a, nbrs in enumerate(self.neighbors):
            for b in nbrs:
                if not 0 <= b < n or b == a:
                    raise MapError(f"bad edge {a}-{b}")
                if a not in self.neighbors[b]:
                    raise MapError(f"asymmetric edge {self.names[a]}-{self.names[b]}")
        dist = self.drive_distances()
        if any(d < 0 for d in dist[0]):
            raise MapError("map graph is not connected")
        if standard:
            if n != 48:
                raise MapError(f"expected 48 cities, got {n}")
            for c in range(N_COLORS):
                k = sum(1 for col in self.colors if col == c)
                if k != 12:
                    raise MapError(f"expected 12 {COLORS[c]} cities, got {k}")
            if START_CITY_NAME not in self.index:
                raise MapError("start city missing")


def _all_pairs(neighbors) -> tuple[tuple[int, ...], ...]:
    n = len(neighbors)
    rows = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        q = deque([s])
        while q:
            u = q.popleft()
            for v in neighbors[u]:
                if dist[v] < 0:
                    dist[v] = dist[u] + 1
                    q.append(v)
        rows.append(tuple(dist))
    return tuple(rows)


def parse_map(text: str) -> CityMap:
    section = None
    cities: list[tuple[int, str, int]] = []
    edges: list[tuple[str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1]
            continue
        parts = [p.strip() for p in line.split(",")]
        if section == "cities":
            if len(parts) != 3:
                raise MapError(f"line {lineno}: expected id,name,color")
            cid, name, color = parts
            if color not in COLORS:
                raise MapError(f"line {lineno}: unknown color {color!r}")
            cities.append((int(cid), name, COLORS.index(color)))
        elif section == "edges":
            if len(parts) != 2:
                raise MapError(f"line {lineno}: expected a,b")
            edges.append((parts[0], parts[1]))
        else:
            raise MapError(f"line {lineno}: content outside a section")
    cities.sort()
    if [c[0] for c in cities] != list(range(len(cities))):
        raise MapError("city ids must be 0..n-1")
    names = tuple(c[1] for c in cities)
    index = {n: i for i, n in enumerate(names)}
    adj: list[set[int]] = [set() for _ in names]
    for a, b in edges:
        if a not in index or b not in index:
            raise MapError(f"edge {a}-{b} names an unknown city")
        adj[index[a]].add(index[b])
        adj[index[b]].add(index[a])
    checksum = hashlib.sha256(text.encode()).hexdigest()[:16]
    return CityMap(
        names=names,
        colors=tuple(c[2] for c in cities),
        neighbors=tuple(tuple(sorted(s)) for s in adj),
        checksum=checksum,
        index=index,
    )


@lru_cache(maxsize=None)
def standard_map() -> CityMap:
    text = resources.files("pandemic_rhea.data").joinpath("standard_map.txt").read_text()
    cmap = parse_map(text)
    cmap.validate(standard=True)
    return cmap


def load_map(path: str | None = None, standard: bool = True) -> CityMap:
    if path is None:
        return standard_map()
    with open(path) as fh:
        cmap = parse_map(fh.read())
    cmap.validate(standard=standard)
    return cmap


def toy_map(edges: list[tuple[int, int]], colors: list[int] | None = None) -> CityMap:
    """Small ad-hoc map keyed by integer ids, for tests and experiments on mechanics."""
    n = 1 + max(max(e) for e in edges)
    adj: list[set[int]] = [set() for _ in range(n)]
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    return CityMap(
        names=tuple(f"c{i}" for i in range(n)),
        colors=tuple(colors if colors is not None else [0] * n),
        neighbors=tuple(tuple(sorted(s)) for s in adj),
        checksum="toy",
    )
