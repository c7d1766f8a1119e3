class ConsensusObsError(Exception):
    """Base class for every error raised by consensus_obs."""


class InvalidInputError(ConsensusObsError, ValueError):
    """A precondition failed: bad dimension, label, modulus or parameter."""


class NotFoundError(ConsensusObsError):
    """No node set satisfying the request exists."""


class ConsistencyError(ConsensusObsError):
    """The congruence route and the spectral route reached different verdicts."""


class VerificationError(ConsensusObsError):
    """A theorem verdict disagreed with the numerical oracle."""

    def __init__(self, message, configuration=None):
        super().__init__(message)
        self.configuration = configuration


class SimulationError(ConsensusObsError):
    """The simulator rejected its inputs or failed a runtime check."""


class HorizonTooShortError(SimulationError):
    """The restricted controllability Gramian is singular for this horizon."""
