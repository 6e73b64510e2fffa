import numpy as np

from ...errors import OracleError
from ...measures import AtomicMeasure
from .parametric_curve import ParametricCurveOracle


class TranslationCurveOracle(ParametricCurveOracle):
    """
    K = {(x -> x + t v) # m : t in [t_min, t_max]}, a fixed measure moving
    rigidly at velocity v. With m a Dirac this is a single moving particle.
    """

    curve_name = 'translation'

    def __init__(self, measure, velocity, t_min, t_max, resolution):
        velocity = np.atleast_1d(np.asarray(velocity, dtype=float))
        if velocity.shape != (measure.dim,):
            raise OracleError("translation velocity and measure differ in dimension")
        self.measure = measure
        self.velocity = velocity
        super().__init__(self.translated, t_min, t_max, float(np.linalg.norm(velocity)),
                         resolution, measure.dim, name=self.curve_name)

    def translated(self, t):
        return AtomicMeasure(self.measure.atoms + t * self.velocity, self.measure.weights)

    def to_dict(self):
        data = super().to_dict()
        data.update(curve=self.curve_name, measure=self.measure.to_dict(),
                    velocity=self.velocity.tolist())
        return data
