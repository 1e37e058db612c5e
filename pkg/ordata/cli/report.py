import time
from dataclasses import dataclass, field

from ordata.common.report_logger import ReportLogger
from ordata.core.formats import serialize_tree

VERDICTS = ('member', 'non-member', 'nonempty', 'empty', 'empty-within-caps', 'sat', 'unsat', 'unknown', 'error')
POSITIVE = ('member', 'nonempty', 'sat')

# stable exit codes
EXIT_CODES = {
    'member': 0, 'nonempty': 0, 'sat': 0,
    'non-member': 1, 'empty': 1, 'unsat': 1,
    'unknown': 2, 'empty-within-caps': 2,
    'error': 3,
}


@dataclass
class RunReport(object):
    """
    Outcome of one command.

    Parameters
    ----------
    command: str
        subcommand that produced the report
    verdict: str
        one of VERDICTS, or None for the purely descriptive commands
    witness: object
        accepted tree backing a positive verdict
    caps: dict
        caps and budgets in effect
    stats: dict
        procedure statistics
    seed: int
        seed in effect
    """

    command: str
    verdict: str = None
    witness: object = None
    caps: dict = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    seed: int = None
    started: float = field(default_factory=time.time)

    def __post_init__(self):
        assert self.verdict is None or self.verdict in VERDICTS, 'unknown verdict {}'.format(self.verdict)

    @property
    def exit_code(self):
        return EXIT_CODES.get(self.verdict, 0)

    def fields(self):
        out = {'command': self.command}
        if self.verdict is not None:
            out['verdict'] = self.verdict
        if self.witness is not None:
            out['witness'] = serialize_tree(self.witness)
        for k, v in self.caps.items():
            out['cap.{}'.format(k)] = v
        for k, v in self.stats.items():
            out[k] = v if isinstance(v, (int, float, str, bool)) or v is None else str(v)
        if self.seed is not None:
            out['seed'] = self.seed
        out['wall_time'] = round(time.time() - self.started, 3)
        return out

    def emit(self, path=None, fmt='text'):
        assert (self.witness is not None) == (self.verdict in POSITIVE), \
            'witness must back exactly the positive verdicts'
        rl = ReportLogger(path, fmt)
        rl.write(self.fields())
        rl.flush()
