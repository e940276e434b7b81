"""Monte Carlo photon transport with instantaneous jumps.

Photons walk forward through a 1-D slab of length ``L`` at speed c.  Free
flights are exponential with mean ``mean_free_path``; every scattering
inside the slab adds a stationary delay ``delay`` and then an instantaneous
forward displacement ``jump``.  A walker stops as soon as its position
reaches ``L``; a jump across the exit is clipped at ``L`` and costs no time.

Two speed estimates are reported:

* ``mean_speed_ratio`` -- the bulk transport speed
  ``sum(distance) / (c * sum(time))`` accumulated over complete
  flight+delay+jump cycles, including the cycle that crosses ``L``
  unclipped.  The cycle count is a stopping time, so by Wald's identity
  this ratio estimator converges to ``(l + jump) / (l + c delay)`` for any
  slab length, which is the quantity the analytic transit model describes.
* ``slab_speed_ratio`` -- ``L / (c * mean transit time)`` through the
  finite slab.  It carries an O(l / L) exit-boundary correction relative to
  the bulk value.

Randomness comes from :mod:`evanescent.counter_rng` keyed by
(master_seed, walker index, event index), so results are bit-identical for
any number of worker threads.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import counter_rng
from .constants import C, PI
from .errors import ConfigError, ValidationError

CSV_COLUMNS = ("seed", "n_walkers", "ell", "jump", "tau1", "L", "speed_ratio", "stderr", "mean_scatters")


@dataclass(frozen=True)
class WalkConfig:
    mean_free_path: float
    length: float
    n_walkers: int
    master_seed: int
    jump: float = 0.0
    delay: float = 0.0

    def __post_init__(self):
        problems = []
        if not self.mean_free_path > 0:
            problems.append("mean_free_path must be positive")
        if not self.length > 0:
            problems.append("length must be positive")
        if not (isinstance(self.n_walkers, (int, np.integer)) and self.n_walkers >= 1):
            problems.append("n_walkers must be an integer >= 1")
        if not self.jump >= 0:
            problems.append("jump must be non-negative")
        if not self.delay >= 0:
            problems.append("delay must be non-negative")
        try:
            counter_rng.check_seed(self.master_seed)
        except (TypeError, ValueError) as exc:
            problems.append(str(exc))
        if problems:
            raise ConfigError("; ".join(problems))

    @classmethod
    def from_index(cls, n, mean_free_path, length, n_walkers, master_seed, delay=0.0):
        """Config whose jump follows the phase-index closure ``jump = 2 pi (n - 1) l``."""
        if n < 1:
            raise ConfigError("phase index closure needs n >= 1")
        return cls(mean_free_path, length, n_walkers, master_seed, jump=2 * PI * (n - 1) * mean_free_path, delay=delay)


@dataclass(frozen=True)
class TransportResult:
    mean_speed_ratio: float
    standard_error: float
    mean_scatter_count: float
    scatter_count_error: float
    slab_speed_ratio: float
    slab_standard_error: float
    walker_count: int
    master_seed: int
    mean_free_path: float
    jump: float
    delay: float
    length: float

    @property
    def implied_group_index(self):
        """``1 / mean_speed_ratio``, with :attr:`group_index_error` from the delta method."""
        return 1.0 / self.mean_speed_ratio

    @property
    def group_index_error(self):
        return self.standard_error / self.mean_speed_ratio**2

    def to_dict(self):
        d = asdict(self)
        d["implied_group_index"] = self.implied_group_index
        d["group_index_error"] = self.group_index_error
        return d

    def csv_row(self):
        return (self.master_seed, self.walker_count, self.mean_free_path, self.jump, self.delay, self.length,
                self.mean_speed_ratio, self.standard_error, self.mean_scatter_count)


def _walk_chunk(cfg, walkers):
    """Per-walker tallies for the walker indices in ``walkers``."""
    n = walkers.size
    ell, jump, delay, L = cfg.mean_free_path, cfg.jump, cfg.delay, cfg.length
    keys = counter_rng.stream_keys(cfg.master_seed, walkers)

    pos = np.zeros(n)
    slab_time = np.zeros(n)  # seconds
    scatters = np.zeros(n, dtype=np.int64)
    cycle_dist = np.zeros(n)  # m
    cycle_time = np.zeros(n)  # seconds
    active = np.arange(n)
    event = 0
    while active.size:
        s = counter_rng.exponential(keys[active], event, ell)
        cycle_dist[active] += s + jump
        cycle_time[active] += s / C + delay

        remaining = L - pos[active]
        escaped = s >= remaining
        gone = active[escaped]
        slab_time[gone] += remaining[escaped] / C

        hit = active[~escaped]
        s_hit = s[~escaped]
        slab_time[hit] += s_hit / C + delay
        scatters[hit] += 1
        pos[hit] += s_hit + jump
        active = hit[pos[hit] < L]
        event += 1
    return slab_time, scatters, cycle_dist, cycle_time


def _ratio_and_error(num, den):
    """Ratio of sums and its delta-method standard error."""
    n = num.size
    r = np.sum(num) / np.sum(den)
    if n < 2:
        return float(r), 0.0
    resid = num - r * den
    var = np.sum(resid * resid) / (n - 1) / n
    return float(r), float(math.sqrt(var) / (np.sum(den) / n))


def simulate(config, n_threads=1):
    """Run ``config.n_walkers`` walkers and summarise them.

    Work is split into ``n_threads`` contiguous walker blocks; per-walker
    tallies land in index order and are reduced with numpy's pairwise sum,
    so the result does not depend on ``n_threads``.
    """
    if not isinstance(config, WalkConfig):
        raise ConfigError("simulate expects a WalkConfig")
    if n_threads < 1:
        raise ConfigError("n_threads must be >= 1")
    idx = np.arange(config.n_walkers, dtype=np.uint64)
    blocks = [b for b in np.array_split(idx, min(n_threads, config.n_walkers)) if b.size]
    if len(blocks) == 1:
        parts = [_walk_chunk(config, blocks[0])]
    else:
        with ThreadPoolExecutor(max_workers=len(blocks)) as pool:
            parts = list(pool.map(lambda b: _walk_chunk(config, b), blocks))
    slab_time, scatters, cycle_dist, cycle_time = (np.concatenate(col) for col in zip(*parts))

    n = config.n_walkers
    speed, speed_err = _ratio_and_error(cycle_dist, C * cycle_time)
    slab_speed, slab_err = _ratio_and_error(np.full(n, config.length), C * slab_time)
    counts = scatters.astype(float)
    count_err = float(np.std(counts, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return TransportResult(
        mean_speed_ratio=speed,
        standard_error=speed_err,
        mean_scatter_count=float(np.sum(counts) / n),
        scatter_count_error=count_err,
        slab_speed_ratio=slab_speed,
        slab_standard_error=slab_err,
        walker_count=n,
        master_seed=int(config.master_seed),
        mean_free_path=config.mean_free_path,
        jump=config.jump,
        delay=config.delay,
        length=config.length,
    )


def sweep(configs, n_threads=1):
    """Simulate each config in order.

    A config that fails validation yields its exception in place of a
    result; the remaining configs still run.
    """
    out = []
    for cfg in configs:
        try:
            out.append(simulate(cfg, n_threads=n_threads))
        except ValidationError as exc:
            out.append(exc)
    return out
