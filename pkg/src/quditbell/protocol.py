"""Monte-Carlo simulation of the entanglement-based key-distribution rounds.

Each round, Alice and Bob independently pick one measurement basis uniformly
at random, measure their halves of a shared entangled pair, and record which
detector fired.  Rounds with matching basis choices are sifted into key dits;
all other rounds feed the Bell-violation estimate used to detect
eavesdropping.

Two modes are supported:

* ``hdDEB``: d bases per party, the a-th basis realizing the homogeneous
  monomial A1^{d-1-a} A2^a built from conjugate-paired generator phases, so
  that matched bases are (for uniform Schmidt coefficients) perfectly
  anti-correlated in detector index: k + k' = 0 mod d.
* ``NDEB``: 4 single-ditter geometric bases per party (the predecessor
  protocol's key-generation path); only basis drawing, sifting, and key
  agreement are simulated — its own Bell check is out of scope.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .algebra import DimensionMismatchError, EntangledState, roots_of_unity
from .bell import (
    BellMonomial,
    BellOperator,
    classical_norm,
    monomial_observables,
    protocol_basis,
    rotation_phase,
)
from .ditter import DitterObservable, LabelConvention, geometric_phases, outcome_distribution
from .security import apply_isotropic_noise

HDDEB_MODE = "hdDEB"
NDEB_MODE = "NDEB"


class InsufficientDataError(RuntimeError):
    """Violation estimation needs at least one round per monomial basis pair."""

    def __init__(self, pairs: Sequence[tuple[int, int]]):
        self.pairs = tuple(pairs)
        super().__init__(
            "no rounds recorded for basis pair(s): "
            + ", ".join(f"(a={a}, b={b})" for a, b in self.pairs)
        )


@dataclass(frozen=True)
class ProtocolConfig:
    d: int
    state: EntangledState
    noise: float = 0.0
    theta: complex | None = None
    rounds: int = 10_000
    rng_seed: int = 0
    mode: str = HDDEB_MODE

    def __post_init__(self):
        if self.state.d != self.d:
            raise DimensionMismatchError(
                f"state dimension {self.state.d} != config dimension {self.d}"
            )
        if not 0.0 <= self.noise <= 1.0:
            raise ValueError(f"noise fraction must be in [0, 1], got {self.noise}")
        if self.rounds < 1:
            raise ValueError(f"rounds must be >= 1, got {self.rounds}")
        if self.mode not in (HDDEB_MODE, NDEB_MODE):
            raise ValueError(f"mode must be {HDDEB_MODE!r} or {NDEB_MODE!r}")

    @property
    def num_bases(self) -> int:
        """d bases per party in hdDEB mode, 4 in NDEB mode."""
        return self.d if self.mode == HDDEB_MODE else 4


@dataclass(frozen=True)
class RoundRecord:
    """One protocol round: basis choices and which detectors fired."""

    index: int
    a: int
    b: int
    alice_detector: int
    bob_detector: int
    alice_outcome: complex
    bob_outcome: complex


@dataclass(frozen=True)
class TranscriptSummary:
    sift_rate: float
    key_alice: tuple[int, ...]
    key_bob: tuple[int, ...]
    agreement_rate: float
    agreement_defined: bool
    pair_correlations: dict[tuple[int, int], complex]
    pair_counts: dict[tuple[int, int], int]

    def to_dict(self) -> dict:
        """JSON-friendly rendering (complex correlations as [re, im])."""
        return {
            "sift_rate": self.sift_rate,
            "key_alice": list(self.key_alice),
            "key_bob": list(self.key_bob),
            "agreement_rate": self.agreement_rate,
            "agreement_defined": self.agreement_defined,
            "pair_correlations": {
                f"{a},{b}": [c.real, c.imag]
                for (a, b), c in sorted(self.pair_correlations.items())
            },
            "pair_counts": {
                f"{a},{b}": n for (a, b), n in sorted(self.pair_counts.items())
            },
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _hddeb_observables(config: ProtocolConfig) -> tuple[list, list]:
    """The d per-party observables A1^{d-1-a} A2^a and B1^{d-1-b} B2^b from
    the conjugate-paired protocol generators."""
    d = config.d
    basis = protocol_basis(d, config.theta)
    alice, bob = [], []
    for a in range(d):
        m = BellMonomial((d - 1 - a, a), (d - 1 - a, a), 1.0)
        a_obs, b_obs = monomial_observables(m, basis)
        alice.append(a_obs)
        bob.append(b_obs)
    return alice, bob


def _ndeb_observables(config: ProtocolConfig) -> tuple[list, list]:
    """Four geometric single-ditter bases per party; Bob uses the conjugate
    phase family so matched bases correlate detectors as k + k' = 0 mod d."""
    from .bell import reference_theta

    d = config.d
    theta = config.theta if config.theta is not None else reference_theta(d)
    alice = [
        DitterObservable(geometric_phases(d, theta, a, +1), LabelConvention.STANDARD)
        for a in range(4)
    ]
    bob = [
        DitterObservable(geometric_phases(d, theta, b, -1), LabelConvention.STANDARD)
        for b in range(4)
    ]
    return alice, bob


def run_protocol(config: ProtocolConfig) -> tuple[list[RoundRecord], TranscriptSummary]:
    """Simulate the full round sequence with a seeded generator.

    Basis indices are drawn uniformly and independently for both parties;
    detector outcomes are sampled from the exact joint distribution of the
    (noisy) state under the chosen observable pair.  The transcript is a
    deterministic function of the configuration.
    """
    d = config.d
    if config.mode == HDDEB_MODE:
        alice_obs, bob_obs = _hddeb_observables(config)
    else:
        alice_obs, bob_obs = _ndeb_observables(config)
    n_bases = config.num_bases

    state = (
        apply_isotropic_noise(config.state, config.noise)
        if config.noise > 0.0
        else config.state
    )

    # exact joint distribution and its flattened CDF for every basis pair
    cdfs = {}
    for a in range(n_bases):
        for b in range(n_bases):
            dist = outcome_distribution(state, alice_obs[a], bob_obs[b])
            cdfs[(a, b)] = np.cumsum(dist.probs.ravel())

    rng = np.random.default_rng(config.rng_seed)
    a_draws = rng.integers(0, n_bases, size=config.rounds)
    b_draws = rng.integers(0, n_bases, size=config.rounds)
    u_draws = rng.random(config.rounds)

    k_out = np.empty(config.rounds, dtype=np.int64)
    kp_out = np.empty(config.rounds, dtype=np.int64)
    for (a, b), cdf in cdfs.items():
        mask = (a_draws == a) & (b_draws == b)
        if not mask.any():
            continue
        flat = np.searchsorted(cdf, u_draws[mask], side="right")
        flat = np.minimum(flat, d * d - 1)
        k_out[mask] = flat // d
        kp_out[mask] = flat % d

    records = [
        RoundRecord(
            index=i,
            a=int(a_draws[i]),
            b=int(b_draws[i]),
            alice_detector=int(k_out[i]),
            bob_detector=int(kp_out[i]),
            alice_outcome=complex(alice_obs[a_draws[i]].labels[k_out[i]]),
            bob_outcome=complex(bob_obs[b_draws[i]].labels[kp_out[i]]),
        )
        for i in range(config.rounds)
    ]
    return records, summarize(records, d)


def sift(
    records: Iterable[RoundRecord], d: int
) -> tuple[tuple[int, ...], tuple[int, ...], float, bool]:
    """Extract the key from matched-basis rounds.

    Alice's dit is her detector index k; Bob's is (d - k') mod d, so the
    perfect-correlation support k + k' = 0 mod d turns into equal dits.
    Returns (key_alice, key_bob, agreement_rate, agreement_defined); the rate
    is flagged undefined when no round survives sifting.
    """
    key_a, key_b = [], []
    for r in records:
        if r.a == r.b:
            key_a.append(r.alice_detector)
            key_b.append((d - r.bob_detector) % d)
    if not key_a:
        return (), (), float("nan"), False
    agree = sum(x == y for x, y in zip(key_a, key_b)) / len(key_a)
    return tuple(key_a), tuple(key_b), agree, True


def summarize(records: Sequence[RoundRecord], d: int) -> TranscriptSummary:
    """Sift the transcript and tabulate per-basis-pair correlations."""
    key_a, key_b, agreement, defined = sift(records, d)
    sums: dict[tuple[int, int], complex] = {}
    counts: dict[tuple[int, int], int] = {}
    for r in records:
        pair = (r.a, r.b)
        sums[pair] = sums.get(pair, 0j) + r.alice_outcome * r.bob_outcome
        counts[pair] = counts.get(pair, 0) + 1
    return TranscriptSummary(
        sift_rate=len(key_a) / len(records) if records else 0.0,
        key_alice=key_a,
        key_bob=key_b,
        agreement_rate=agreement,
        agreement_defined=defined,
        pair_correlations={p: sums[p] / counts[p] for p in sums},
        pair_counts=counts,
    )


def default_basis_map(t: BellOperator) -> dict[BellMonomial, tuple[int, int]]:
    """The canonical bijection monomial -> basis pair: A1^{d-1-a} A2^a is
    Alice's a-th protocol observable, so (a, b) = (A2 power, B2 power)."""
    return {m: (m.alice_exponents[1], m.bob_exponents[1]) for m in t.monomials}


def estimate_violation(
    records: Sequence[RoundRecord],
    t: BellOperator,
    basis_map: Mapping[BellMonomial, tuple[int, int]] | None = None,
) -> tuple[float, float]:
    """Empirical violation factor from transcript correlations.

    Each monomial's expectation is estimated by the sample mean of the complex
    outcome-label products over the rounds measured in its basis pair; the
    standard error combines the per-pair sample variances of the (real)
    per-round contributions, treating pairs as independent samples.
    """
    if basis_map is None:
        basis_map = default_basis_map(t)
    d = t.d
    by_pair: dict[tuple[int, int], list[complex]] = {}
    for r in records:
        by_pair.setdefault((r.a, r.b), []).append(r.alice_outcome * r.bob_outcome)

    starved = [basis_map[m] for m in t.monomials if basis_map[m] not in by_pair]
    if starved:
        raise InsufficientDataError(sorted(set(starved)))

    norm = classical_norm(d)
    phase = rotation_phase(d)
    v_hat = 0.0
    variance = 0.0
    for m in t.monomials:
        samples = np.asarray(by_pair[basis_map[m]])
        contrib = (phase * m.coefficient * samples).real / norm
        n = len(contrib)
        v_hat += float(contrib.mean())
        if n > 1:
            variance += float(contrib.var(ddof=1)) / n
    return v_hat, float(np.sqrt(variance))


def correlation_spectrum(
    state: EntangledState, theta: complex | None = None, a: int = 0
) -> np.ndarray:
    """Distribution of k + k' mod d under matched geometric bases.

    P(m) = |c_m|^2 / d with c_m = sum_j delta_j omega^{jm}.  The result does
    not depend on the base phase theta or the basis index a: for matched
    conjugate-paired geometric bases those phase factors cancel between the
    parties.  Both arguments are accepted (and validated) for interface
    symmetry with the simulator.

    P(0) < 1 means matched-basis outcomes are not perfectly correlated and
    the state leaks key errors even on a noiseless channel.
    """
    d = state.d
    if theta is not None and abs(abs(theta) - 1.0) > 1e-9:
        raise ValueError(f"theta must be unit modulus, got |{theta}|")
    if not 0 <= a < d:
        raise ValueError(f"basis index must be in [0, {d}), got {a}")
    w = roots_of_unity(d)
    m = np.arange(d)
    c = (state.deltas[np.newaxis, :] * w[np.newaxis, :] ** m[:, np.newaxis]).sum(axis=1)
    return np.abs(c) ** 2 / d


def write_transcript_csv(records: Iterable[RoundRecord], path) -> None:
    """Transcript export: one row per round with basis and detector indices."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["round", "a", "b", "k", "k'"])
        for r in records:
            writer.writerow([r.index, r.a, r.b, r.alice_detector, r.bob_detector])


def transcript_csv_string(records: Iterable[RoundRecord]) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["round", "a", "b", "k", "k'"])
    for r in records:
        writer.writerow([r.index, r.a, r.b, r.alice_detector, r.bob_detector])
    return buf.getvalue()
