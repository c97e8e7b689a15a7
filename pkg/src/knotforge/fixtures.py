"""Named diagrams and space curves used by the tests, docs and CLI.

Perko pair: ``perko-a`` is the closure of the 3-braid
s1^3 s2 s1^-1 s2 s1^2 s2^2, the usual table braid for 10_161.  ``perko-b``
is an all-positive 10-crossing diagram of the same knot reached from
``perko-a`` by a seeded walk of Reidemeister moves and flypes; its writhe
(10) differs from ``perko-a`` (8), which is the whole point of the pair.

Maxwell link: the Whitehead link, PD code from the Knot Atlas entry L5a1.
"""

from __future__ import annotations

import numpy as np

from .classical import PolyCurve3
from .codes import parse
from .diagram import Diagram
from .errors import KnotforgeError

CODES: dict[str, str] = {
    "unknot": "PD[]",
    "trefoil-r": "PD[X(4,2,5,1), X(6,4,1,3), X(2,6,3,5)]",
    "trefoil-l": "PD[X(1,4,2,5), X(3,6,4,1), X(5,2,6,3)]",
    "fig8": "DT[4 6 8 2]",
    "hopf-plus": "PD[X(1,3,2,4), X(3,1,4,2)]",
    "hopf-minus": "PD[X(4,1,3,2), X(2,3,1,4)]",
    "maxwell": "PD[X(6,1,7,2), X(10,7,5,8), X(4,5,1,6), X(2,10,3,9), X(8,4,9,3)]",
    "perko-a": (
        "PD[X(1,6,2,7), X(3,11,4,10), X(5,15,6,14), X(8,18,9,17), X(11,5,12,4), "
        "X(12,20,13,19), X(15,3,16,2), X(16,8,17,7), X(18,10,19,9), X(20,14,1,13)]"
    ),
    "perko-b": (
        "PD[X(1,5,2,4), X(3,13,4,12), X(6,16,7,15), X(7,1,8,20), X(10,18,11,17), "
        "X(11,3,12,2), X(13,9,14,8), X(16,6,17,5), X(18,10,19,9), X(19,15,20,14)]"
    ),
}


def _circle(center, radius, plane: str, n: int = 48) -> np.ndarray:
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    c, s = radius * np.cos(th), radius * np.sin(th)
    z = np.zeros_like(th)
    pts = {"xy": (c, s, z), "xz": (c, z, s), "yz": (z, c, s)}[plane]
    return np.stack(pts, axis=1) + np.asarray(center, dtype=float)


def _figure_eight_curve(n: int = 96) -> np.ndarray:
    # lobes around (+-0.8, 0, 0) in the xz-plane; the two passes through the
    # middle are pushed apart in y
    s = np.linspace(0, 2 * np.pi, n, endpoint=False)
    return np.stack([1.2 * np.sin(s), 0.15 * np.cos(s), 0.6 * np.sin(2 * s)], axis=1)


def _threading_loop() -> np.ndarray:
    # passes through both lobes in the +y direction, returning above and below
    return np.array(
        [
            (0.8, -1, 0), (0.8, 1, 0), (0.8, 1, 2), (-0.8, -1, 2),
            (-0.8, -1, 0), (-0.8, 1, 0), (-0.8, 1, -2), (0.8, -1, -2),
        ],
        dtype=float,
    )


CURVES: dict[str, object] = {
    "hopf3d": (lambda: [_circle((0, 0, 0), 1.0, "xy"), _circle((1, 0, 0), 1.0, "xz")[::-1]]),
    "maxwell3d": (lambda: [_threading_loop(), _figure_eight_curve()]),
    "split3d": (lambda: [_circle((0, 0, 0), 1.0, "xy"), _circle((5, 0, 0), 1.0, "xz")]),
}

PREFIX = "fixtures:"


def names() -> list[str]:
    return list(CODES)


def curve_names() -> list[str]:
    return list(CURVES)


def diagram(name: str) -> Diagram:
    name = name.removeprefix(PREFIX)
    if name not in CODES:
        raise KnotforgeError(f"unknown diagram fixture {name!r}")
    return parse(CODES[name])


def curves(name: str) -> list[PolyCurve3]:
    name = name.removeprefix(PREFIX)
    if name not in CURVES:
        raise KnotforgeError(f"unknown curve fixture {name!r}")
    return [PolyCurve3(p) for p in CURVES[name]()]


def is_fixture_ref(text: str) -> bool:
    return text.startswith(PREFIX)
