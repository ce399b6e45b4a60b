"""CG-SENSE baseline: ridge-regularized SENSE solved by conjugate gradients.

Minimizes 0.5 * ||M F S x - y||^2 + lam * ||x||^2 through the normal equations
(E^H E + 2 lam I) x = E^H y.
"""
import logging
from dataclasses import dataclass, field
from typing import List

import numpy as np
from scipy.sparse.linalg import LinearOperator, cg

from apps.corecode.exceptions import ConfigurationError, ShapeError
from apps.numerics.tensors import ComplexImage

from .operators import decode, encode

logger = logging.getLogger(__name__)


@dataclass
class CGResult:
    image: ComplexImage
    iterations: int
    converged: bool
    residual: float
    objective_history: List[float] = field(default_factory=list)

    def metadata(self):
        return {
            "iterations": self.iterations,
            "converged": self.converged,
            "residual": self.residual,
            "final_objective": (
                self.objective_history[-1] if self.objective_history else None
            ),
        }


def cg_sense(kspace, sens, mask, lam=0.0, max_iters=50, tol=1e-6):
    """Solve the ridge SENSE problem; non-convergence is reported, not raised.

    ``tol`` bounds the normal-equation residual relative to ||E^H y||.
    """
    if lam < 0:
        raise ConfigurationError(f"lambda must be >= 0, got {lam}")
    if kspace.coils != sens.coils or sens.shape != mask.shape:
        raise ShapeError("k-space, sensitivities and mask disagree in shape")

    shape = mask.shape
    rows = mask.rows
    maps = sens.maps
    y = mask.apply(kspace.data)
    size = shape[0] * shape[1]

    def normal(vec):
        image = vec.reshape(shape)
        return (decode(encode(image, maps, rows), maps) + 2.0 * lam * image).ravel()

    def objective(vec):
        image = vec.reshape(shape)
        misfit = encode(image, maps, rows) - y
        penalty = lam * np.vdot(image, image).real
        return float(0.5 * np.vdot(misfit, misfit).real + penalty)

    rhs = decode(y, maps).ravel()
    operator = LinearOperator((size, size), matvec=normal, dtype=np.complex128)
    start = np.zeros(size, dtype=np.complex128)
    history = [objective(start)]
    best = {"x": start, "objective": history[0]}

    def track(xk):
        value = objective(xk)
        history.append(value)
        if value <= best["objective"]:
            best["x"], best["objective"] = xk.copy(), value

    rhs_norm = np.linalg.norm(rhs)
    if rhs_norm == 0:
        solution, info = start, 0
    else:
        solution, info = cg(
            operator,
            rhs,
            x0=start,
            rtol=tol,
            atol=0.0,
            maxiter=max_iters,
            callback=track,
        )
        if objective(solution) > best["objective"]:
            solution = best["x"]
    residual = np.linalg.norm(normal(solution) - rhs) / rhs_norm if rhs_norm else 0.0
    converged = info == 0
    if not converged:
        logger.info(
            "CG-SENSE stopped after %d iterations, residual %.3e",
            len(history) - 1,
            residual,
        )
    return CGResult(
        image=ComplexImage.from_complex(solution.reshape(shape)),
        iterations=len(history) - 1,
        converged=converged,
        residual=float(residual),
        objective_history=history,
    )
