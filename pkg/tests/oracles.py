"""Independent oracles, written against the machine semantics only.

Nothing here imports the package: configurations are plain tuples, so the
oracles cannot inherit a bug from the code they check.
"""

from __future__ import annotations

from fractions import Fraction


def counter_steps(n: int) -> int:
    """Steps of the adding machine on ``n`` zeros, by a direct binary counter.

    The head sits right of the counter.  To add one it walks left over the
    trailing ones (turning each into a zero on its right), flips the first
    zero, walks back right over the zeros and resets its state.  Once the
    counter holds ``2^n - 1`` the leftward walk runs off the left end and
    the machine stops with one final move.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    bits = [0] * n
    steps = 0
    value = 0
    while True:
        pos = n
        while pos > 0 and bits[pos - 1] == 1:
            bits[pos - 1] = 0  # carried over to the right of the head
            pos -= 1
            steps += 1
        if pos == 0:
            steps += 1  # switch to the final state
            break
        bits[pos - 1] = 1
        steps += 1
        steps += n - pos  # walk back over the zeros
        steps += 1  # reset to the counting state
        value += 1
        assert int("".join(map(str, bits)), 2) == value
    assert value == 2**n - 1
    return steps


# frozen after checking against counter_steps and the closed form below
FROZEN_STEPS = {1: 4, 2: 11, 3: 26, 4: 57, 5: 120, 6: 247}


def trailing_ones(k: int) -> int:
    t = 0
    while k & 1:
        k >>= 1
        t += 1
    return t


def counter_closed_form(n: int) -> int:
    # each increment from k costs 2*t(k)+2, the final sweep n+1
    return sum(2 * trailing_ones(k) + 2 for k in range(2**n - 1)) + n + 1


# ------------------------------------------------------------ adding invariant


def _act(v: Fraction, letters) -> Fraction:
    """Right action of ``a0: v -> 2v`` and ``a1: v -> 2v+1`` (and inverses)."""
    for name, sign in letters:
        one = name.endswith("1")
        if sign == 1:
            v = 2 * v + (1 if one else 0)
        else:
            v = (v - (1 if one else 0)) / 2
    return v


def _a0_exponent(t) -> int | None:
    if any(not name.endswith("0") for name, _ in t):
        return None
    return sum(sign for _, sign in t)


def adding_invariant(states, tapes) -> Fraction | None:
    """``frac((-1) . X)`` for the one-letter adding machine, ``None`` for dead p3 classes.

    ``X = t1 a1^j`` in p1 and ``X = t1 a0^j`` in p2 where ``t2 = a0^j``.
    In p3, ``X = t1 a0^j`` and the class is reachable from p1 only when
    ``X`` is a power ``a0^m``; it then carries the value of ``a1^m``, which
    is 0.  Every rule preserves the value.
    """
    _, p, _ = states
    t1, t2 = tapes
    j = _a0_exponent(t2)
    if j is None:
        raise ValueError("segment 2 holds only a0 letters")
    if p == "p1":
        X = list(t1) + [("a1", 1 if j >= 0 else -1)] * abs(j)
    elif p in ("p2", "p3"):
        X = list(t1) + [("a0", 1 if j >= 0 else -1)] * abs(j)
    else:
        raise ValueError(p)
    if p == "p3":
        m = _free_a0_power(X)
        if m is None:
            return None
        X = [("a1", 1 if m >= 0 else -1)] * abs(m)
    v = _act(Fraction(-1), X)
    return v - (v.numerator // v.denominator)


def _free_a0_power(X) -> int | None:
    out: list = []
    for x in X:
        if out and out[-1][0] == x[0] and out[-1][1] == -x[1]:
            out.pop()
        else:
            out.append(x)
    return _a0_exponent(out)
