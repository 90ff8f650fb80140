"""Bounds for a GMAC where both senders' private messages are confidential.

Each sender's private message must stay secret from the other sender's
receiver. Rates are (R0, R1, R2, R1e, R2e): common rate, two private rates,
and the two equivocation rates (sender 1's message at receiver 2, sender 2's
message at receiver 1).

For a scheme p(q) p(u|q) p(x1|u) p(v|q) p(x2|v) the decodability terms are

    m1  = I(U; Y | V, Q)        m2  = I(V; Y | U, Q)
    m12 = I(U, V; Y | Q)        mt  = I(U, V, Q; Y)

and the leakage penalties are

    e1 = I(U; Y2 | X2, V, Q)    e2 = I(V; Y1 | X1, U, Q)

The achievable equivocation set at fixed rates is a union of three boxes of
constraints: the joint list, and two relaxations that buy a larger cap for
one equivocation by giving up the other entirely.
"""

from __future__ import annotations

import math

import numpy as np

from .channel import ChannelSpec
from .errors import PieceExplosion
from .infotheory import SchemeTwoSet, assemble_joint_two_set, mutual_information
from .regions import (
    RatePolytope,
    clip_plus_split,
    piece_is_empty,
    polytope,
    template,
)

COORDS_MAC = ("R0", "R1", "R2")
COORDS_EQ = ("R1e", "R2e")
COORDS_FULL = ("R0", "R1", "R2", "R1e", "R2e")

MAX_PIECES = 64


def two_set_terms(scheme: SchemeTwoSet, channel: ChannelSpec) -> dict:
    """All six information terms for one scheme, keyed m1/m2/m12/mt/e1/e2."""
    joint = assemble_joint_two_set(scheme, channel)
    return {
        "m1": mutual_information(joint, "U", "Y", ("V", "Q")),
        "m2": mutual_information(joint, "V", "Y", ("U", "Q")),
        "m12": mutual_information(joint, ("U", "V"), "Y", ("Q",)),
        "mt": mutual_information(joint, ("U", "V", "Q"), "Y"),
        "e1": mutual_information(joint, "U", "Y2", ("X2", "V", "Q")),
        "e2": mutual_information(joint, "V", "Y1", ("X1", "U", "Q")),
    }


def mac_polytope(scheme: SchemeTwoSet, channel: ChannelSpec) -> RatePolytope:
    """Decodable-rate piece in (R0, R1, R2), ignoring confidentiality."""
    t = two_set_terms(scheme, channel)
    return polytope(
        COORDS_MAC,
        [
            ((0.0, 1.0, 0.0), t["m1"]),
            ((0.0, 0.0, 1.0), t["m2"]),
            ((0.0, 1.0, 1.0), t["m12"]),
            ((1.0, 1.0, 1.0), t["mt"]),
        ],
    )


def _plus(x: float) -> float:
    return x if x > 0.0 else 0.0


def equivocation_set_explicit(scheme: SchemeTwoSet, channel: ChannelSpec,
                              r0: float, r1: float, r2: float):
    """The two-sender equivocation set at fixed rates, as explicit pieces.

    Returns three pieces over (R1e, R2e). The first constrains both
    equivocations jointly, including the two sum caps; the other two zero
    one equivocation and keep only the other's caps, which can reach
    farther when the zeroed sender's rate sits below its leakage penalty.
    """
    for name, r in (("r0", r0), ("r1", r1), ("r2", r2)):
        if r < 0:
            raise ValueError(f"{name} must be nonnegative, got {r}")
    t = two_set_terms(scheme, channel)
    m1, m2, m12, mt = t["m1"], t["m2"], t["m12"], t["mt"]
    e1, e2 = t["e1"], t["e2"]
    joint_piece = polytope(
        COORDS_EQ,
        [
            ((1.0, 0.0), r1),
            ((0.0, 1.0), r2),
            ((1.0, 0.0), _plus(m1 - e1)),
            ((1.0, 0.0), _plus(m12 - r2 - e1)),
            ((1.0, 0.0), _plus(mt - r0 - r2 - e1)),
            ((0.0, 1.0), _plus(m2 - e2)),
            ((0.0, 1.0), _plus(m12 - r1 - e2)),
            ((0.0, 1.0), _plus(mt - r0 - r1 - e2)),
            ((1.0, 1.0), _plus(m12 - e1 - e2)),
            ((1.0, 1.0), _plus(mt - r0 - e1 - e2)),
        ],
    )
    only_first = polytope(
        COORDS_EQ,
        [
            ((0.0, 1.0), 0.0),
            ((1.0, 0.0), r1),
            ((1.0, 0.0), _plus(m1 - e1)),
            ((1.0, 0.0), _plus(m12 - r2 - e1)),
            ((1.0, 0.0), _plus(mt - r0 - r2 - e1)),
        ],
    )
    only_second = polytope(
        COORDS_EQ,
        [
            ((1.0, 0.0), 0.0),
            ((0.0, 1.0), r2),
            ((0.0, 1.0), _plus(m2 - e2)),
            ((0.0, 1.0), _plus(m12 - r1 - e2)),
            ((0.0, 1.0), _plus(mt - r0 - r1 - e2)),
        ],
    )
    return [joint_piece, only_first, only_second]


def equivocation_set_oracle(scheme: SchemeTwoSet, channel: ChannelSpec,
                            r0: float, r1: float, r2: float,
                            step: float = 0.01) -> np.ndarray:
    """Grid enumeration of the equivocation set straight from its definition.

    Sweeps total codebook rate pairs (t1, t2) on a step grid: each sender
    transmits its message plus dummy randomness, so t1 >= r1 and t2 >= r2,
    and (r0, t1, t2) must be decodable. Each feasible pair contributes the
    rectangle R1e <= min(r1, [t1 - e1]_+), R2e <= min(r2, [t2 - e2]_+).
    Returns the grid points covered by at least one rectangle, as an
    (n, 2) array; empty when no pair is decodable at all.

    This is the slow cross-check for equivocation_set_explicit, not a tool
    for production sweeps.
    """
    if step <= 0:
        raise ValueError("step must be positive")
    t = two_set_terms(scheme, channel)
    m1, m2, m12, mt = t["m1"], t["m2"], t["m12"], t["mt"]
    e1, e2 = t["e1"], t["e2"]
    eps = 1e-12

    t1_max = min(m1, m12 - r2, mt - r0 - r2)
    t1_lo = math.ceil(r1 / step - eps)
    t1_hi = math.floor(t1_max / step + eps)
    t2_lo = math.ceil(r2 / step - eps)

    caps = []
    for i1 in range(t1_lo, t1_hi + 1):
        t1 = i1 * step
        t2_max = min(m2, m12 - t1, mt - r0 - t1)
        i2 = math.floor(t2_max / step + eps)
        if i2 < t2_lo:
            continue
        t2 = i2 * step
        cap1 = min(r1, _plus(t1 - e1))
        cap2 = min(r2, _plus(t2 - e2))
        caps.append((cap1, cap2))
    if not caps:
        return np.empty((0, 2))

    points = []
    cap_arr = np.array(caps)
    x_hi = math.floor(cap_arr[:, 0].max() / step + eps)
    for ix in range(x_hi + 1):
        x = ix * step
        covering = cap_arr[cap_arr[:, 0] >= x - eps]
        if covering.shape[0] == 0:
            continue
        y_max = covering[:, 1].max()
        for iy in range(math.floor(y_max / step + eps) + 1):
            points.append((x, iy * step))
    return np.array(points)


def two_set_region_piece(scheme: SchemeTwoSet, channel: ChannelSpec,
                         max_pieces: int = MAX_PIECES):
    """Full achievable pieces in (R0, R1, R2, R1e, R2e) for one scheme.

    The fixed-rate equivocation caps become clipped constraints with the
    rates inside the brackets, so the three constraint families expand into
    at most 2^5 + 2^2 + 2^2 plain pieces before empty ones are dropped.
    Raises PieceExplosion if a larger expansion is requested via max_pieces.
    """
    t = two_set_terms(scheme, channel)
    m1, m2, m12, mt = t["m1"], t["m2"], t["m12"], t["mt"]
    e1, e2 = t["e1"], t["e2"]

    z = (0.0, 0.0, 0.0, 0.0, 0.0)

    def vec(r0=0.0, r1=0.0, r2=0.0, r1e=0.0, r2e=0.0):
        return (r0, r1, r2, r1e, r2e)

    rate_plain = [
        (vec(r1=1), m1),
        (vec(r2=1), m2),
        (vec(r1=1, r2=1), m12),
        (vec(r0=1, r1=1, r2=1), mt),
    ]
    families = []
    families.append(template(
        COORDS_FULL,
        plain=rate_plain + [
            (vec(r1=-1, r1e=1), 0.0),
            (vec(r2=-1, r2e=1), 0.0),
        ],
        clipped=[
            (vec(r1e=1), z, m1 - e1),
            (vec(r1e=1), vec(r2=-1), m12 - e1),
            (vec(r1e=1), vec(r0=-1, r2=-1), mt - e1),
            (vec(r2e=1), z, m2 - e2),
            (vec(r2e=1), vec(r1=-1), m12 - e2),
            (vec(r2e=1), vec(r0=-1, r1=-1), mt - e2),
            (vec(r1e=1, r2e=1), z, m12 - e1 - e2),
            (vec(r1e=1, r2e=1), vec(r0=-1), mt - e1 - e2),
        ],
    ))
    families.append(template(
        COORDS_FULL,
        plain=rate_plain + [
            (vec(r2e=1), 0.0),
            (vec(r1=-1, r1e=1), 0.0),
        ],
        clipped=[
            (vec(r1e=1), z, m1 - e1),
            (vec(r1e=1), vec(r2=-1), m12 - e1),
            (vec(r1e=1), vec(r0=-1, r2=-1), mt - e1),
        ],
    ))
    families.append(template(
        COORDS_FULL,
        plain=rate_plain + [
            (vec(r1e=1), 0.0),
            (vec(r2=-1, r2e=1), 0.0),
        ],
        clipped=[
            (vec(r2e=1), z, m2 - e2),
            (vec(r2e=1), vec(r1=-1), m12 - e2),
            (vec(r2e=1), vec(r0=-1, r1=-1), mt - e2),
        ],
    ))

    def branching_count(tmpl):
        return sum(
            1 for cc in tmpl.clipped if np.max(np.abs(cc.affine)) > 1e-15
        )

    worst = sum(2 ** branching_count(f) for f in families)
    if worst > max_pieces:
        raise PieceExplosion(
            f"expansion would produce up to {worst} pieces, cap is {max_pieces}"
        )
    pieces = []
    for fam in families:
        pieces.extend(clip_plus_split(fam))
    return pieces


def secrecy_inner_pieces(scheme: SchemeTwoSet, channel: ChannelSpec):
    """Perfect-secrecy pieces in (R0, R1, R2) for one scheme.

    Three pieces: both senders secret, only sender 1 active, only sender 2
    active. Pieces made infeasible by a negative cap are dropped; a cap of
    exactly zero keeps the piece as a face (the spent sender pinned at rate
    zero).
    """
    t = two_set_terms(scheme, channel)
    m1, m2, m12, mt = t["m1"], t["m2"], t["m12"], t["mt"]
    e1, e2 = t["e1"], t["e2"]
    candidates = [
        polytope(COORDS_MAC, [
            ((0.0, 1.0, 0.0), m1 - e1),
            ((0.0, 0.0, 1.0), m2 - e2),
            ((0.0, 1.0, 1.0), m12 - e1 - e2),
            ((1.0, 1.0, 1.0), mt - e1 - e2),
        ]),
        polytope(COORDS_MAC, [
            ((0.0, 0.0, 1.0), 0.0),
            ((0.0, 1.0, 0.0), m1 - e1),
            ((1.0, 1.0, 0.0), mt - e1),
        ]),
        polytope(COORDS_MAC, [
            ((0.0, 1.0, 0.0), 0.0),
            ((0.0, 0.0, 1.0), m2 - e2),
            ((1.0, 0.0, 1.0), mt - e2),
        ]),
    ]
    return [p for p in candidates if not piece_is_empty(p)]
