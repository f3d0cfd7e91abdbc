"""Prometheus metrics for the generator models and the reconstruction attack."""

from prometheus_client import REGISTRY, Counter, Histogram, write_to_textfile

# ── Generators ───────────────────────────────────────────────────────────────
KEYSTREAM_BITS = Counter(
    "keystream_bits",
    "Keystream bits produced by the generator simulators",
    ["generator"],  # sg | ccsg
)

# ── CA synthesis ─────────────────────────────────────────────────────────────
SYNTHESIS_LATENCY = Histogram(
    "ca_synthesis_seconds",
    "Wall time of one 90/150 CA synthesis search",
    buckets=[0.001, 0.01, 0.05, 0.1, 0.5, 1.0, 5.0, 30.0],
)
SYNTHESIS_CANDIDATES = Counter(
    "ca_synthesis_candidates",
    "Suffix candidates examined by the meet-in-the-middle synthesis",
)

# ── Attack ───────────────────────────────────────────────────────────────────
RECONSTRUCTED_BITS = Counter(
    "reconstructed_bits",
    "Keystream bits recovered by the reconstruction attack",
    ["source"],  # intercepted | phase-shift | interleave-completion
)
ATTACK_INCONSISTENCIES = Counter(
    "attack_inconsistencies",
    "Reconstruction runs aborted because of conflicting bits",
)

# ── Verification ─────────────────────────────────────────────────────────────
VERIFY_RUNS = Counter(
    "verify_runs",
    "End-to-end CA replay verifications",
    ["outcome"],  # pass | fail
)


def dump_metrics(path: str) -> None:
    """Write the default registry in the Prometheus text format."""
    write_to_textfile(path, REGISTRY)
