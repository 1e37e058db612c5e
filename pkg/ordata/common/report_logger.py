import json
import os
import sys


class ReportLogger(object):

    def __init__(self, path=None, fmt='text'):
        """
        Writes run reports either as `key: value` lines or as one JSON record per line.

        Parameters
        ----------
        path: str
            file to append reports to. stdout is used if None.

        fmt: str
            'text' or 'record'
        """
        assert fmt in ['text', 'record'], 'unknown report format {}'.format(fmt)

        self.path = path
        self.fmt = fmt

        if self.path is None:
            self.fh = sys.stdout
        else:
            directory = os.path.dirname(self.path)
            if directory:
                os.makedirs(directory, exist_ok=True)
            self.fh = open('{}'.format(self.path), 'a')

    def __del__(self):

        # flush internal buffer and close filehandle
        if hasattr(self, 'fh') and self.fh is not sys.stdout:
            self.fh.flush()
            self.fh.close()

    @staticmethod
    def format(fields, fmt='text'):
        if fmt == 'record':
            return json.dumps(fields, sort_keys=False, separators=(',', ':'))
        return '\n'.join('{}: {}'.format(k, v) for k, v in fields.items())

    def write(self, fields):
        self.fh.write('{}\n'.format(self.format(fields, self.fmt)))

    def flush(self):
        self.fh.flush()
