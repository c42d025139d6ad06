"""Parameter-grid evaluation of the backflow, BLP and resonance maps.

Cells are independent: each one is evaluated from its own coordinates with
no shared state, and its result is written to a slot fixed in advance. The
output therefore does not depend on the number of workers or on the order in
which cells complete.
"""
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .bath import BathParams, resonance_deviation
from .energetics import backflow_measure
from .errors import BackflowError, InputError
from .nonmarkov import blp_measure
from .tcl2 import SystemParams, TimeGrid

log = logging.getLogger(__name__)

KINDS = ("backflow", "blp", "resonance_deviation")


@dataclass(frozen=True)
class GridSpec:
    """Uniform ``n_temp x n_omega`` grid of cells over the two ranges.

    Cell coordinates are cell centres, so the range ends are never evaluated.
    """

    omega_range: Tuple[float, float] = (0.2, 5.0)
    temp_range: Tuple[float, float] = (0.2, 5.0)
    n_omega: int = 50
    n_temp: int = 50

    def __post_init__(self):
        for name in ("omega_range", "temp_range"):
            lo, hi = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise InputError(f"{name} must be finite")
            if lo <= 0 or hi <= lo:
                raise InputError(f"{name} needs 0 < min < max, got {(lo, hi)}")
        if self.n_omega < 2 or self.n_temp < 2:
            raise InputError("grid needs at least 2 cells per axis")

    @staticmethod
    def _centres(lo, hi, n):
        width = (hi - lo) / n
        return lo + width * (np.arange(n) + 0.5)

    @property
    def omegas(self) -> np.ndarray:
        return self._centres(*self.omega_range, self.n_omega)

    @property
    def temps(self) -> np.ndarray:
        return self._centres(*self.temp_range, self.n_temp)

    @property
    def cell_widths(self) -> Tuple[float, float]:
        (a, b), (c, d) = self.omega_range, self.temp_range
        return (b - a) / self.n_omega, (d - c) / self.n_temp

    def cells(self):
        """``(i_temp, i_omega, omega, temp)`` in row-major order."""
        om, te = self.omegas, self.temps
        for i in range(self.n_temp):
            for j in range(self.n_omega):
                yield i, j, float(om[j]), float(te[i])


@dataclass
class HeatmapGrid:
    """Cell values with rows indexed by temperature and columns by cutoff."""

    spec: GridSpec
    values: np.ndarray
    meta: dict
    failed_cells: List[dict] = field(default_factory=list)

    def __post_init__(self):
        if self.values.shape != (self.spec.n_temp, self.spec.n_omega):
            raise InputError("values do not match the grid shape")

    def rows(self):
        """``(omega_c, T_E, value)`` triples in row-major order."""
        for i, j, om, te in self.spec.cells():
            yield om, te, float(self.values[i, j])

    def argmax(self) -> Tuple[float, float]:
        """``(omega_c, T_E)`` of the largest finite cell."""
        i, j = np.unravel_index(np.nanargmax(self.values), self.values.shape)
        return float(self.spec.omegas[j]), float(self.spec.temps[i])


@dataclass(frozen=True)
class _Job:
    kind: str
    coupling: float
    omega0: float
    t_max: float
    dt: float
    free_evolution: bool = True
    raw: bool = False


def _evaluate(job: _Job, omega, temp) -> float:
    p = BathParams(job.coupling, omega, temp)
    if job.kind == "resonance_deviation":
        dev = resonance_deviation(p, job.omega0)
        return dev if job.raw else abs(dev)
    grid = TimeGrid(job.t_max, job.dt)
    if job.kind == "backflow":
        s = SystemParams(job.omega0, temp)
        return backflow_measure(p, s, grid).value
    s = SystemParams(job.omega0)
    return blp_measure(p, s, grid, free_evolution=job.free_evolution).value


def _run_cells(job: _Job, cells):
    out = []
    for i, j, om, te in cells:
        try:
            out.append((i, j, _evaluate(job, om, te), None))
        except (BackflowError, ArithmeticError, ValueError) as exc:
            out.append((i, j, math.nan, f"{type(exc).__name__}: {exc}"))
    return out


def default_jobs() -> int:
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:
        return max(1, os.cpu_count() or 1)


def _sweep(job: _Job, spec: GridSpec, jobs=None, order=None) -> HeatmapGrid:
    cells = list(spec.cells())
    if order is not None:
        order = [int(k) for k in order]
        if sorted(order) != list(range(len(cells))):
            raise InputError("order must be a permutation of the cell indices")
        cells = [cells[k] for k in order]
    jobs = default_jobs() if jobs is None else int(jobs)
    if jobs < 1:
        raise InputError("jobs must be at least 1")

    if jobs == 1 or len(cells) == 1:
        results = _run_cells(job, cells)
    else:
        # interleaved chunks balance cheap and expensive regions of the grid
        chunks = [cells[k::jobs * 4] for k in range(jobs * 4)]
        chunks = [c for c in chunks if c]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = [r for part in pool.map(_run_cells, [job] * len(chunks),
                                              chunks)
                       for r in part]

    values = np.full((spec.n_temp, spec.n_omega), np.nan)
    failed = []
    for i, j, val, err in results:
        values[i, j] = val
        if err is not None:
            failed.append({"i_temp": i, "i_omega": j,
                           "omega_c": float(spec.omegas[j]),
                           "T_E": float(spec.temps[i]), "error": err})
    failed.sort(key=lambda c: (c["i_temp"], c["i_omega"]))
    for c in failed:
        log.warning("cell (Omega=%.4g, T_E=%.4g) failed: %s",
                    c["omega_c"], c["T_E"], c["error"])

    meta = {"measure": job.kind, "lambda": job.coupling,
            "omega0": job.omega0, "grid": asdict(spec)}
    if job.kind != "resonance_deviation":
        meta.update(t_max=job.t_max, dt=job.dt)
    if job.kind == "blp":
        meta["free_evolution"] = job.free_evolution
    if job.kind == "resonance_deviation":
        meta["raw"] = job.raw
    return HeatmapGrid(spec, values, meta, failed)


def sweep_backflow(spec: GridSpec = GridSpec(), coupling=0.1,
                   grid: TimeGrid = TimeGrid(), omega0=1.0, jobs=None,
                   order: Optional[Sequence[int]] = None) -> HeatmapGrid:
    """Energy-backflow map with the initial state at the bath temperature.

    Parameters
    ----------
    spec : GridSpec
    coupling : float
    grid : TimeGrid
        Integration grid used in every cell.
    omega0 : float
    jobs : int, optional
        Worker processes; defaults to the available CPUs.
    order : sequence of int, optional
        Evaluation order of the row-major cell indices. Does not change the
        result.
    """
    job = _Job("backflow", coupling, omega0, grid.t_max, grid.dt)
    return _sweep(job, spec, jobs, order)


def sweep_blp(spec: GridSpec = GridSpec(), coupling=0.1,
              grid: TimeGrid = TimeGrid(), omega0=1.0, jobs=None,
              order: Optional[Sequence[int]] = None,
              free_evolution=True) -> HeatmapGrid:
    """BLP map for the canonical pair; arguments as in :func:`sweep_backflow`."""
    job = _Job("blp", coupling, omega0, grid.t_max, grid.dt, free_evolution)
    return _sweep(job, spec, jobs, order)


def sweep_resonance_deviation(spec: GridSpec = GridSpec(), coupling=0.1,
                              omega0=1.0, raw=False, jobs=1,
                              order: Optional[Sequence[int]] = None
                              ) -> HeatmapGrid:
    """Map of ``|dJ_eff/domega|`` at ``omega0``; ``raw`` keeps the sign."""
    job = _Job("resonance_deviation", coupling, omega0, 0.0, 0.0, raw=raw)
    return _sweep(job, spec, jobs, order)
