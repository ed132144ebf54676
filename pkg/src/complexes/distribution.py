import numpy as np

from complexes.errors import InvalidDistribution

MASS_TOL = 1e-12


class Distribution(object):
    """
    Probability distribution over a finite, ordered support.

    Args:
        support: sequence of hashable labels (facet tuples, Faces, ints ...).
        mass: masses aligned with `support`.
        tol (float): allowed deviation of the total mass from 1.
    """

    def __init__(self, support, mass, tol=MASS_TOL):
        self.support = tuple(support)
        self.mass = np.asarray(mass, dtype=np.float64).copy()
        if self.mass.ndim != 1 or self.mass.shape[0] != len(self.support):
            raise InvalidDistribution('support has %d labels but mass has shape %s'
                                      % (len(self.support), self.mass.shape))
        if len(self.support) == 0:
            raise InvalidDistribution('empty support')
        if not np.all(np.isfinite(self.mass)) or np.any(self.mass < 0):
            raise InvalidDistribution('masses must be finite and nonnegative')
        total = self.mass.sum()
        if abs(total - 1.0) > tol:
            raise InvalidDistribution('total mass %.17g is not 1' % total)
        self.mass.setflags(write=False)
        self.index = {label: i for i, label in enumerate(self.support)}
        if len(self.index) != len(self.support):
            raise InvalidDistribution('duplicate labels in support')

    @classmethod
    def normalized(cls, support, weights):
        weights = np.asarray(weights, dtype=np.float64)
        return cls(support, weights / weights.sum())

    @classmethod
    def point_mass(cls, label, support=None):
        if support is None:
            support = [label]
        mass = np.zeros(len(support))
        mass[list(support).index(label)] = 1.
        return cls(support, mass)

    @classmethod
    def uniform(cls, support):
        support = list(support)
        return cls(support, np.full(len(support), 1. / len(support)))

    def __len__(self):
        return len(self.support)

    def __getitem__(self, label):
        i = self.index.get(label)
        return 0. if i is None else float(self.mass[i])

    def __repr__(self):
        return 'Distribution(%s)' % ', '.join('%r: %.6g' % (l, m) for l, m in zip(self.support, self.mass))

    def items(self):
        return zip(self.support, self.mass)

    def aligned(self, labels):
        """Masses of `labels` in the given order, zero for labels off the support."""
        return np.array([self[l] for l in labels], dtype=np.float64)

    def allclose(self, other, atol=1e-12):
        labels = sorted(set(self.support) | set(other.support), key=repr)
        return np.allclose(self.aligned(labels), other.aligned(labels), rtol=0, atol=atol)

    def to_dict(self):
        return {'support': [list(l) if isinstance(l, tuple) else l for l in self.support],
                'mass': self.mass.tolist()}


def tuple_marginal(dist, positions):
    """Marginal of a distribution over tuples onto the coordinates `positions`."""
    positions = tuple(positions)
    acc = {}
    for label, m in dist.items():
        key = tuple(label[p] for p in positions)
        acc[key] = acc.get(key, 0.) + m
    keys = sorted(acc)
    return Distribution(keys, [acc[k] for k in keys], tol=1e-10)


def tuple_pinning(dist, positions, values):
    """Conditional of a tuple distribution given `label[positions] == values`.

    Returned over the remaining coordinates, in tuple order.
    """
    positions = tuple(positions)
    values = tuple(values)
    rest = [p for p in range(len(dist.support[0])) if p not in positions]
    acc = {}
    for label, m in dist.items():
        if tuple(label[p] for p in positions) != values:
            continue
        key = tuple(label[p] for p in rest)
        acc[key] = acc.get(key, 0.) + m
    total = sum(acc.values())
    if total <= 0:
        raise InvalidDistribution('pinning %r has zero mass' % (values,))
    keys = sorted(acc)
    return Distribution(keys, [acc[k] / total for k in keys], tol=1e-10)
