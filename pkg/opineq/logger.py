# This file is part of opineq and is released under the
# BSD 3-Clause license.
# See LICENSE in the root of the repository for full licensing details.
import logging
import sys


class CapturableHandler(logging.StreamHandler):

    @property
    def stream(self):
        return sys.stdout

    @stream.setter
    def stream(self, value):
        pass


def _add_handler(logger, level, handler):
    logger.setLevel(level)
    formatter = logging.Formatter('%(message)s')
    handler.setFormatter(formatter)
    handler.setLevel(level)
    logger.addHandler(handler)
    logger.handler_set = True


def _remove_handler(logger):
    logger.handlers.pop()
    logger.handler_set = False


def log_module():
    logger = logging.getLogger(__name__)
    handler = CapturableHandler()
    if not getattr(logger, 'handler_set', None):
        _add_handler(logger, logging.INFO, handler)
    return logger


def _set_level(level):
    logger = logging.getLogger(__name__)
    handler = CapturableHandler()
    if getattr(logger, 'handler_set', None):
        _remove_handler(logger)
    _add_handler(logger, level, handler)


def muffle_logger():
    """
    Switches the logging level to ``ERROR`` or higher, muffling the
    per-plan summaries written by the suite runner. Unexpected failures
    are still reported.
    """
    _set_level(logging.ERROR)


def silence_logger():
    """
    Switches the logging level above ``CRITICAL`` so that nothing, not
    even unexpected failures, reaches stdout. Used while a machine-readable
    report is streamed to stdout.
    """
    _set_level(logging.CRITICAL + 1)


def reset_logger():
    """
    Switches the level back to ``INFO`` so that ``opineq`` reports
    plan summaries, catalog disagreements and findings as usual.
    """
    _set_level(logging.INFO)


def _to_comma_and_str(component_list, noun):
    if len(component_list) > 1:
        msg = ", ".join(component_list[:-1]) + " and " + component_list[-1]
        return msg + ' ' + noun
    elif len(component_list) == 1:
        return component_list[0] + ' ' + noun
    else:
        return str(noun)


def log_failures(check_ids, what='checks failed'):
    logger = log_module()
    if check_ids:
        msg = "\t" + _to_comma_and_str(sorted(check_ids), what) + "\n"
        logger.error(msg)


def log_disagreements(names, flag):
    logger = log_module()
    if names:
        msg = "\t" + _to_comma_and_str(sorted(names), 'disagree with the') + \
              " claimed {} flag\n".format(flag)
        logger.info(msg)


def log_findings(check_id, findings):
    logger = log_module()
    for finding in findings:
        logger.info("\t{}: {}\n".format(check_id, finding))
