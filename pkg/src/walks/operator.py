import numpy as np
import pandas as pd

from complexes.errors import DomainMismatch, NotStochastic, StationarityViolation

OPERATOR_TOL = 1e-10


class MarkovOperator(object):
    """
    Dense operator between two finite measure spaces.

    Rows are indexed by the support of `domain_measure` and columns by the
    support of `codomain_measure`, both in support order.

    Args:
        matrix (ndarray): (|U|, |V|) array.
        domain_measure (Distribution): pi_U.
        codomain_measure (Distribution): pi_V.
        row_stochastic (bool): validate rows and stationarity when set.
        name (str): label used in logs and CSV dumps.
    """

    def __init__(self, matrix, domain_measure, codomain_measure, row_stochastic=True, name='',
                 tol=OPERATOR_TOL):
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self.domain_measure = domain_measure
        self.codomain_measure = codomain_measure
        self.row_stochastic = row_stochastic
        self.name = name
        if self.matrix.shape != (len(domain_measure), len(codomain_measure)):
            raise DomainMismatch('matrix shape %s does not match measures (%d, %d)'
                                 % (self.matrix.shape, len(domain_measure), len(codomain_measure)))
        if row_stochastic:
            if np.any(self.matrix < -tol):
                raise NotStochastic('%s has negative entries' % name)
            rows = self.matrix.sum(axis=1)
            if np.max(np.abs(rows - 1.)) > tol:
                raise NotStochastic('%s rows deviate from 1 by %.3g' % (name, np.max(np.abs(rows - 1.))))
            pushed = domain_measure.mass @ self.matrix
            if np.max(np.abs(pushed - codomain_measure.mass)) > tol:
                raise StationarityViolation('%s does not carry its domain measure to its codomain measure'
                                            % name)
        self.matrix.setflags(write=False)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def domain_labels(self):
        return self.domain_measure.support

    @property
    def codomain_labels(self):
        return self.codomain_measure.support

    def __matmul__(self, other):
        if self.codomain_labels != other.domain_labels:
            raise DomainMismatch('cannot compose %s with %s' % (self.name, other.name))
        return MarkovOperator(self.matrix @ other.matrix, self.domain_measure, other.codomain_measure,
                              row_stochastic=self.row_stochastic and other.row_stochastic,
                              name='%s%s' % (self.name, other.name))

    def __repr__(self):
        return 'MarkovOperator(%s, shape=%s)' % (self.name, self.shape)

    def row(self, label):
        return self.matrix[self.domain_measure.index[label]]

    def to_frame(self):
        cols = [_label_str(l) for l in self.codomain_labels]
        rows = [_label_str(l) for l in self.domain_labels]
        return pd.DataFrame(self.matrix, index=rows, columns=cols)

    def to_csv(self, path):
        write_operator_csv(self, path)


def _label_str(label):
    if isinstance(label, tuple):
        return ' '.join(str(_label_str(x)) for x in label)
    return str(label)


def rank_one(measure, name='1pi'):
    """The operator 1 pi that sends every state to `measure`."""
    m = len(measure)
    return MarkovOperator(np.tile(measure.mass, (m, 1)), measure, measure, name=name)


def identity(measure, name='I'):
    return MarkovOperator(np.eye(len(measure)), measure, measure, name=name)


def write_operator_csv(op, path):
    """Dense dump with facet labels on both axes, full float precision."""
    df = op.to_frame()
    df.to_csv(path, float_format='%.17g')
    return df
