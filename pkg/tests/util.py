"""Small helpers shared by the test modules."""

from miscube.cube import Cube


def vx(s: str) -> int:
    """Vertex from its coordinate string, coordinate 1 first: ``vx("100") == 1``."""
    return sum(int(c) << j for j, c in enumerate(s))


def vset(cube: Cube, *strings: str) -> int:
    return cube.from_vertices(vx(s) for s in strings)
