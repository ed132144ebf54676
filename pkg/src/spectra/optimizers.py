"""
Maximization of divergence ratios over the probability simplex.

Two search strategies share one objective,
    r(mu) = D(mu C || p_out) / D(mu || p_in):
an exhaustive lattice over the simplex for small supports and a batched
projected gradient ascent (torch autograd) for the rest.
"""
import itertools
from functools import lru_cache

import numpy as np
import torch
from scipy.special import comb, rel_entr

from complexes.errors import DegenerateDivergence, InstanceTooLarge

MAX_GRID_POINTS = 2000000
DIVERGENCE_FLOOR = 1e-12


def grid_size(d, steps):
    return int(comb(steps + d - 1, d - 1, exact=True))


@lru_cache(maxsize=16)
def simplex_grid(d, steps):
    """All points of the simplex in R^d whose coordinates are multiples of 1/steps."""
    if d == 1:
        return np.ones((1, 1))
    size = grid_size(d, steps)
    if size > MAX_GRID_POINTS:
        raise InstanceTooLarge('simplex grid with d=%d, step 1/%d has %d points' % (d, steps, size))
    bars = np.fromiter(itertools.chain.from_iterable(itertools.combinations(range(steps + d - 1), d - 1)),
                       dtype=np.int64, count=size * (d - 1)).reshape(size, d - 1)
    edges = np.hstack([np.full((size, 1), -1), bars, np.full((size, 1), steps + d - 1)])
    grid = (np.diff(edges, axis=1) - 1).astype(np.float64) / steps
    grid.setflags(write=False)
    return grid


def divergence_ratio(mu, C, p_in, p_out):
    """r(mu) at a single point; raises DegenerateDivergence when mu equals p_in."""
    den = float(np.sum(rel_entr(mu, p_in)))
    if den <= DIVERGENCE_FLOOR:
        raise DegenerateDivergence('D(mu || p_in) = %.3g' % den)
    return float(np.sum(rel_entr(mu @ C, p_out))) / den


def grid_ratios(grid, C, p_in, p_out, chunk=65536):
    """r over every grid row, with 0 where the denominator vanishes."""
    out = np.zeros(grid.shape[0])
    for start in range(0, grid.shape[0], chunk):
        mu = grid[start:start + chunk]
        den = rel_entr(mu, p_in[None, :]).sum(axis=1)
        num = rel_entr(mu @ C, p_out[None, :]).sum(axis=1)
        ok = den > DIVERGENCE_FLOOR
        out[start:start + chunk][ok] = num[ok] / den[ok]
    return out


def project_simplex(v):
    """Euclidean projection of every row of v onto the probability simplex."""
    d = v.shape[1]
    u, _ = torch.sort(v, dim=1, descending=True)
    css = torch.cumsum(u, dim=1) - 1.
    ind = torch.arange(1, d + 1, dtype=v.dtype)
    rho = (u - css / ind > 0).sum(dim=1, keepdim=True)
    theta = css.gather(1, rho - 1) / rho.to(v.dtype)
    return torch.clamp(v - theta, min=0.)


def _kl_rows(p, q):
    return (torch.xlogy(p, p) - p * torch.log(q)).sum(dim=1)


class SimplexAscent(object):
    """
    Batched projected gradient ascent of r(mu).

    Args:
        steps (int): ascent iterations per restart.
        learning_rate (float): initial step length along the normalized gradient.
        lr_decay (float): multiplicative step decay per iteration.
        floor (float): smallest coordinate kept after projection.
    """

    def __init__(self, steps=300, learning_rate=0.1, lr_decay=0.99, floor=1e-12):
        self.steps = steps
        self.learning_rate = learning_rate
        self.lr_decay = lr_decay
        self.floor = floor

    def _objective(self, mu, C, p_in, p_out):
        den = _kl_rows(mu, p_in[None, :])
        num = _kl_rows(mu @ C, p_out[None, :])
        ok = den > DIVERGENCE_FLOOR
        return torch.where(ok, num / torch.where(ok, den, torch.ones_like(den)), torch.zeros_like(den))

    def maximize(self, C, p_in, p_out, restarts=8, seed=0, starts=None):
        """
        Returns:
            (best ratio, argmax mu) over all restarts and iterations.
        """
        C = torch.as_tensor(np.asarray(C), dtype=torch.float64)
        p_in = torch.as_tensor(np.asarray(p_in), dtype=torch.float64)
        p_out = torch.as_tensor(np.asarray(p_out), dtype=torch.float64)
        d = p_in.shape[0]

        g = torch.Generator().manual_seed(int(seed))
        mu = -torch.log(torch.rand(restarts, d, generator=g, dtype=torch.float64))
        mu = mu / mu.sum(dim=1, keepdim=True)
        if starts is not None and len(starts) > 0:
            mu = torch.cat([torch.as_tensor(np.asarray(starts), dtype=torch.float64), mu], dim=0)
        mu = self._clean(mu)

        best_val = torch.full((mu.shape[0],), -1.0, dtype=torch.float64)
        best_mu = mu.clone()
        lr = self.learning_rate
        for _ in range(self.steps):
            mu.requires_grad_(True)
            val = self._objective(mu, C, p_in, p_out)
            grad, = torch.autograd.grad(val.sum(), mu)
            with torch.no_grad():
                better = val > best_val
                best_val = torch.where(better, val, best_val)
                best_mu[better] = mu[better]
                grad = torch.nan_to_num(grad, nan=0., posinf=0., neginf=0.)
                step = grad / (grad.norm(dim=1, keepdim=True) + 1e-300)
                mu = self._clean(project_simplex(mu + lr * step))
            lr *= self.lr_decay
        with torch.no_grad():
            val = self._objective(mu, C, p_in, p_out)
            better = val > best_val
            best_val = torch.where(better, val, best_val)
            best_mu[better] = mu[better]
        i = int(torch.argmax(best_val))
        return max(float(best_val[i]), 0.), best_mu[i].numpy()

    def _clean(self, mu):
        mu = torch.clamp(mu, min=self.floor)
        return (mu / mu.sum(dim=1, keepdim=True)).detach()
