"""
Output of a solve: the path bundle, its flow at the grid times and the
per-step diagnostics.
"""
import numpy as np

from ..measures import wasserstein1_value


class SolveResult:
    """
    :attributes
        bundle: PathBundle chi
        flow: e_t # chi at every grid time
        diagnostics: dict of per-step lists ('residuals', 'dist_to_K', ...)
            and scalars ('merge_error', 'coupling_rate')
    """

    def __init__(self, bundle, mode, diagnostics=None):
        self.bundle = bundle
        self.mode = mode
        self.flow = [bundle.evaluate(t) for t in bundle.grid]
        self.diagnostics = diagnostics if diagnostics is not None else {}

    @property
    def times(self):
        return self.bundle.grid

    @property
    def horizon(self):
        return float(self.bundle.grid[-1] - self.bundle.grid[0])

    @property
    def steps(self):
        return self.bundle.grid.shape[0] - 1

    def flow_at(self, t):
        """The flow measure at the grid time t."""
        k = int(np.argmin(np.abs(self.bundle.grid - t)))
        if abs(self.bundle.grid[k] - t) > 1e-12:
            return self.bundle.evaluate(t)
        return self.flow[k]

    def max_dist_to_K(self):
        return float(max(self.diagnostics.get('dist_to_K', [0.0])))

    def flow_gap(self, a, b):
        """W1 between the flow at grid indices a and b."""
        return wasserstein1_value(self.flow[a], self.flow[b])

    def __repr__(self):
        return "SolveResult({}, n={}, T={:g}, trajectories={})".format(
            self.mode, self.steps, self.horizon, self.bundle.size)
