"""The two frames everything here revolves around: the fork and the W."""

from __future__ import annotations

from .algebra import ClosureAlgebra, cm
from .frame import Frame


def fork_frame() -> Frame:
    return Frame.from_pairs(["u", "v", "w"], [("u", "v"), ("u", "w")], reflexive=True)


def w_frame() -> Frame:
    return Frame.from_pairs(
        ["u", "u'", "t", "v", "w"],
        [("u", "t"), ("u", "v"), ("u'", "v"), ("u'", "w")],
        reflexive=True,
    )


def b_fork() -> ClosureAlgebra:
    return cm(fork_frame())


def b_w() -> ClosureAlgebra:
    return cm(w_frame())


NAMED_FRAMES = {"fork": fork_frame, "w": w_frame}
