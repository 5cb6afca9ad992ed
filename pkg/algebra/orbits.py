"""Union-find over hashable points, used to partition cocycles and factor systems into orbits."""

from typing import Dict, Hashable, Iterable, List


class UnionFind:
    def __init__(self, points: Iterable[Hashable]):
        self.parent = {x: x for x in points}
        self.rank = {x: 0 for x in self.parent}

    def find(self, x):
        y = self.parent[x]
        if self.parent[y] != y:
            y = self.parent[x] = self.find(y)
        return y

    def union(self, x, y) -> None:
        x, y = self.find(x), self.find(y)
        if x == y:
            return
        if self.rank[x] < self.rank[y]:
            x, y = y, x
        elif self.rank[x] == self.rank[y]:
            self.rank[x] += 1
        self.parent[y] = x

    def blocks(self) -> List[List]:
        """Blocks as sorted lists, ordered by their smallest member."""
        found: Dict = {}
        for x in sorted(self.parent):
            found.setdefault(self.find(x), []).append(x)
        return sorted(found.values(), key=lambda block: block[0])
