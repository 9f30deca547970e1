"""Exception hierarchy"""


class OdelipError(Exception):
    """Base class for all odelip errors"""


class InputError(OdelipError, ValueError):
    """Precondition or shape violation"""


class DomainError(InputError):
    """Argument outside the domain of a right-hand side"""


class IntegrationError(OdelipError):
    """Non-finite state encountered while integrating"""
    
    def __init__(self, message: str, time: float):
        super().__init__(f"{message} (t={time:g})")
        self.time = time


class DivergenceError(OdelipError):
    """Non-finite loss during training"""
    
    def __init__(self, message: str, epoch: int):
        super().__init__(f"{message} (epoch {epoch})")
        self.epoch = epoch


class NormalizationError(OdelipError):
    """Relative error requested against all-zero references"""


class ConfigError(OdelipError):
    """Invalid experiment configuration"""


class CheckpointError(OdelipError):
    """Missing or corrupt parameter checkpoint"""
