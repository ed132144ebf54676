from complexes.complex import is_link_connected
from spectra.entropy import eta_param_estimate
from spectra.linalg import sigma2
from spectra.params import eps_param, eps_product_profile, gamma_params
from spectra.subspaces import subspace_U
from walks.walks import check_order, down_up_walk, sequential_sweep


class SpectralCache(object):
    """
    Memo of the derived quantities of one complex, shared by the
    certificates and the report so each operator is built once.

    Args:
        X (WeightedComplex): the instance.
        budget (int): restarts for the entropy estimators.
        seed (int): base seed for the entropy estimators.
        grid_step (float): lattice resolution for the entropy estimators, None for automatic.
    """

    def __init__(self, X, budget=8, seed=0, grid_step=None):
        self.X = X
        self.budget = budget
        self.seed = seed
        self.grid_step = grid_step
        self._eps = {}
        self._eta = {}
        self._sweeps = {}
        self._subspaces = {}
        self._gamma = None
        self._profile = None
        self._glauber = None
        self._connected = None

    def eps(self, I, J):
        key = tuple(sorted([tuple(sorted(I)), tuple(sorted(J))]))
        if key not in self._eps:
            self._eps[key] = eps_param(self.X, key[0], key[1])
        return self._eps[key]

    def eta(self, I, J):
        key = (tuple(sorted(I)), tuple(sorted(J)))
        if key not in self._eta:
            self._eta[key] = eta_param_estimate(self.X, key[0], key[1], budget=self.budget,
                                                seed=self.seed, grid_step=self.grid_step)
        return self._eta[key]

    def gamma(self):
        if self._gamma is None:
            self._gamma = gamma_params(self.X) if self.X.n >= 2 else []
        return self._gamma

    def profile(self):
        if self._profile is None:
            self._profile = eps_product_profile(self.X) if self.X.n >= 2 else []
        return self._profile

    def sweep(self, order):
        order = check_order(self.X, order)
        if order not in self._sweeps:
            self._sweeps[order] = sequential_sweep(self.X, order)
        return self._sweeps[order]

    def sigma2_sweep(self, order):
        return sigma2(self.sweep(order))

    def glauber(self):
        if self._glauber is None:
            self._glauber = down_up_walk(self.X)
        return self._glauber

    def subspace(self, I):
        key = tuple(sorted(I))
        if key not in self._subspaces:
            self._subspaces[key] = subspace_U(self.X, key)
        return self._subspaces[key]

    def link_connected(self):
        if self._connected is None:
            self._connected = is_link_connected(self.X)
        return self._connected
