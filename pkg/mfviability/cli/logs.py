import sys
import logging

import colorlog

LONG_FORMAT = '%(log_color)s%(asctime)s.%(msecs)03d %(levelname)-7s %(name)s:%(reset)s %(message)s'
# batch runners stamp their own time and job name
SHORT_FORMAT = '%(log_color)s%(levelname)s:%(reset)s %(message)s'

LEVEL_COLORS = {
    'DEBUG': 'cyan',
    'INFO': 'green',
    'WARNING': 'yellow',
    'ERROR': 'red',
    'CRITICAL': 'bold_red',
}

VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)


def run_log_handler(short=False, stream=None):
    """
    Colored stderr handler for a command run. Colors are dropped when the
    stream is not a terminal, so redirected run logs stay plain text.
    """
    stream = stream if stream is not None else sys.stderr
    handler = colorlog.StreamHandler(stream)
    handler.setFormatter(colorlog.TTYColoredFormatter(
        SHORT_FORMAT if short else LONG_FORMAT,
        stream=stream,
        datefmt='%H:%M:%S',
        log_colors=LEVEL_COLORS))
    return handler


def configure_logging(verbose, short_log=False):
    """-v: warnings, -vv: info, -vvv: debug. Without -v Python defaults apply."""
    if not verbose:
        return
    level = VERBOSITY[min(verbose, len(VERBOSITY)) - 1]
    root = logging.getLogger()
    root.setLevel(level)
    root.handlers = []
    root.addHandler(run_log_handler(short_log))
    # POT and scipy stay at warnings or above
    for name in ('ot', 'scipy'):
        logging.getLogger(name).setLevel(max(level, logging.WARNING))
