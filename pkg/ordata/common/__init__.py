from .report_logger import ReportLogger
from .errors import OrdataError
