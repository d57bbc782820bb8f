"""First-order radio model: electronics cost per bit plus a d^2 amplifier term.

The cost functions are plain arithmetic, so they accept numpy arrays for
``k``/``d``/``signals`` as well as scalars.
"""

import math

from wepsim.model import RadioParams


def distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def tx_cost(radio: RadioParams, k, d):
    return radio.e_elec * k + radio.eps_amp * k * d * d


def rx_cost(radio: RadioParams, k):
    return radio.e_elec * k


def agg_cost(radio: RadioParams, k, signals):
    """Fusing ``signals`` incoming-plus-own signals of ``k`` bits each."""
    return radio.e_da * k * signals
