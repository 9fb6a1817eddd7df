from logging import DEBUG, ERROR, INFO, WARNING, Logger, getLogger


class Loggable:

    logger: Logger = None

    def _init_logger(self):
        self.logger = getLogger(f'{self.__class__.__module__}.{self.__class__.__name__}')

    def __init__(self):
        self._init_logger()

    def _enabled(self, level: int) -> bool:
        if not self.logger:
            self._init_logger()
        return self.logger.isEnabledFor(level)

    def debug(self, *args, **kwargs):
        if self._enabled(DEBUG):
            self.logger.debug(*args, **kwargs)

    def info(self, *args, **kwargs):
        if self._enabled(INFO):
            self.logger.info(*args, **kwargs)

    def warning(self, *args, **kwargs):
        if self._enabled(WARNING):
            self.logger.warning(*args, **kwargs)

    def error(self, *args, **kwargs):
        if self._enabled(ERROR):
            self.logger.error(*args, **kwargs)
