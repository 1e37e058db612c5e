import logging
import time

from tabulate import tabulate

from ordata.common.report_logger import ReportLogger
from ordata.odta.automaton import EmptinessCaps


class BaseProcedure(object):

    def __init__(self,
                 automaton,
                 alg_name,
                 name='default',
                 caps=None,
                 report_file=None,
                 report_format='text',
                 progress=False,
                 **kwargs,
                 ):
        """
        This class takes care of the bookkeeping every decision procedure needs to do:
        caps, statistics, logging and writing a run report.

        Parameters
        ----------
        automaton: object
            the automaton the procedure decides something about

        alg_name: str
            name of the procedure, e.g. empty-weak, empty-odta. Also the logger name.

        name: str
            descriptive name of this run, e.g. the file the automaton was read from

        caps: EmptinessCaps
            search bounds, defaults are used if None

        report_file: str
            if given, a run report is appended to this file after `run()`

        report_format: str
            'text' (key: value lines) or 'record' (one JSON line)

        progress: bool
            shows tqdm progress bars on long enumerations

        """

        # instance name
        self.name = name
        self.alg_name = alg_name

        # automaton to decide on
        self.automaton = automaton

        self.caps = EmptinessCaps() if caps is None else caps
        self.progress = progress

        self.report_file = report_file
        self.report_format = report_format

        # counters filled in by the subclass, reported at the end
        self.stats = {}

        # logger for different levels
        self.logger = logging.getLogger(self.alg_name)

        self._t0 = None

    def run(self):
        raise NotImplementedError

    def _start(self):
        self._t0 = time.time()
        self.logger.debug('{} on {} with caps {}'.format(self.alg_name, self.name, self.caps.as_dict()))

    def _finalize(self, verdict):
        """ Call this at the end of `run()`: attaches statistics and caps to the verdict and writes the report. """
        wall = 0.0 if self._t0 is None else time.time() - self._t0
        verdict.report.setdefault('procedure', self.alg_name)
        verdict.report.setdefault('caps', self.caps.as_dict())
        verdict.report['stats'] = dict(self.stats)
        verdict.report['wall_time'] = round(wall, 4)

        self.log_summary()
        self.logger.info('{} {}: {} ({:.2f}s)'.format(self.alg_name, self.name, verdict.kind, wall))

        if self.report_file is not None:
            rl = ReportLogger(self.report_file, self.report_format)
            rl.write({'name': self.name, 'verdict': verdict.kind, 'seed': self.caps.seed,
                      'wall_time': verdict.report['wall_time'], 'stats': self.stats})
            rl.flush()
        return verdict

    def log_summary(self):
        if not self.stats:
            return
        rows = [[k, v] for k, v in self.stats.items()]
        self.logger.debug('\n{}'.format(tabulate(rows, headers=['counter', 'value'])))
