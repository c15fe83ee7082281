import logging

from tcoulomb.config import Config
import tcoulomb.constants as constants


class Logger():
    """
    Returns a standard logger whose records reach the package handlers.

    Handlers live on the package logger only; passing a config (re)installs
    them, module loggers just propagate.
    """

    def __new__(cls, name, config=None):
        package_logger = logging.getLogger(constants.PACKAGE_NAME)
        if config is not None or not package_logger.handlers:
            cls._configure(package_logger, config or Config())
        return logging.getLogger(name)

    @staticmethod
    def _configure(logger, config):
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()
        logger.setLevel(logging.DEBUG)
        logger.propagate = False
        log_console_handler = logging.StreamHandler()
        log_console_handler.setFormatter(logging.Formatter(config.get('log.console.format')))
        log_console_handler.setLevel(config.get('log.console.level'))
        logger.addHandler(log_console_handler)
        if config.get('debug.log.enabled'):
            log_file_handler = logging.FileHandler(config.get('debug.log.filepath'))
            log_file_handler.setFormatter(logging.Formatter(config.get('debug.log.format')))
            log_file_handler.setLevel(config.get('debug.log.level'))
            logger.addHandler(log_file_handler)
