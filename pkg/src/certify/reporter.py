""" Report manager utility """
from __future__ import print_function

import time

from certify.certificates import FAIL, PASS, VACUOUS
from others.logging import logger


def build_report_manager(opt):
    if getattr(opt, 'tensorboard', False):
        from tensorboardX import SummaryWriter
        writer = SummaryWriter(opt.tensorboard_log_dir, comment="hdx")
    else:
        writer = None
    return ReportMgr(tensorboard_writer=writer)


class ReportMgr(object):
    def __init__(self, tensorboard_writer=None):
        """
        A report manager that logs certificate batches and sampler curves on
        standard output as well as (optionally) TensorBoard

        Args:
            tensorboard_writer(:obj:`tensorboardX.SummaryWriter`):
                The TensorBoard Summary writer to use or None
        """
        self.tensorboard_writer = tensorboard_writer
        self.start_time = time.time()
        self.stats = CertificateStats()

    def report_certificates(self, name, certs):
        stats = CertificateStats()
        stats.add(certs)
        for c in certs:
            if c.verdict == FAIL:
                logger.warning('%s: %r (%s)' % (name, c, c.details))
        stats.output(name)
        self.stats.update(stats)
        if self.tensorboard_writer is not None:
            self.stats.log_tensorboard('certify', self.tensorboard_writer, self.stats.n_instances)
        return stats

    def report_curve(self, tag, curve, exact=None):
        if self.tensorboard_writer is None:
            return
        for row in curve:
            self.tensorboard_writer.add_scalar(tag + '/estimate', row.estimate, row.t)
            self.tensorboard_writer.add_scalar(tag + '/ci_high', row.ci_high, row.t)
            if exact is not None and row.t < len(exact):
                self.tensorboard_writer.add_scalar(tag + '/exact', exact[row.t], row.t)

    def close(self):
        self.stats.output('total', elapsed=time.time() - self.start_time)
        if self.tensorboard_writer is not None:
            self.tensorboard_writer.close()


class CertificateStats(object):
    """
    Accumulator for certificate verdicts, overall and per theorem, and for
    how often the colored-walk bound beats the union baseline.
    """

    def __init__(self):
        self.counts = {PASS: 0, FAIL: 0, VACUOUS: 0}
        self.by_theorem = {}
        self.n_instances = 0
        self.baseline_comparable = 0
        self.baseline_improved = 0

    def add(self, certs):
        self.n_instances += 1
        for c in certs:
            self.counts[c.verdict] += 1
            per = self.by_theorem.setdefault(c.theorem_id, {PASS: 0, FAIL: 0, VACUOUS: 0})
            per[c.verdict] += 1
            if c.theorem_id == 'cwadv' and c.details.get('baseline_comparable'):
                self.baseline_comparable += 1
                self.baseline_improved += int(bool(c.details.get('improves_baseline')))

    def update(self, stat):
        """
        Update statistics by summing counts with another `CertificateStats` object
        """
        self.n_instances += stat.n_instances
        for k, v in stat.counts.items():
            self.counts[k] += v
        for t, per in stat.by_theorem.items():
            mine = self.by_theorem.setdefault(t, {PASS: 0, FAIL: 0, VACUOUS: 0})
            for k, v in per.items():
                mine[k] += v
        self.baseline_comparable += stat.baseline_comparable
        self.baseline_improved += stat.baseline_improved

    @property
    def failed(self):
        return self.counts[FAIL] > 0

    def improvement_rate(self):
        """Share of comparable cwadv certificates whose bound is below the baseline; None if there are none."""
        if self.baseline_comparable == 0:
            return None
        return self.baseline_improved / float(self.baseline_comparable)

    def to_dict(self):
        return {'instances': self.n_instances, 'counts': dict(self.counts),
                'by_theorem': {t: dict(v) for t, v in sorted(self.by_theorem.items())},
                'cwadv_baseline': {'comparable': self.baseline_comparable, 'improved': self.baseline_improved,
                                   'rate': self.improvement_rate()}}

    def output(self, name, elapsed=None):
        """Write out statistics to the log."""
        msg = "%s: %d pass; %d fail; %d vacuous" % (
            name, self.counts[PASS], self.counts[FAIL], self.counts[VACUOUS])
        if self.baseline_comparable:
            msg += "; cwadv beats baseline %d/%d" % (self.baseline_improved, self.baseline_comparable)
        if elapsed is not None:
            msg += "; %d instances; %6.1f sec" % (self.n_instances, elapsed)
        logger.info(msg)

    def log_tensorboard(self, prefix, writer, step):
        """ display statistics to tensorboard """
        for k, v in self.counts.items():
            writer.add_scalar(prefix + "/" + k, v, step)
        rate = self.improvement_rate()
        if rate is not None:
            writer.add_scalar(prefix + "/cwadv_improvement_rate", rate, step)
