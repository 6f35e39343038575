class AdmsynthError(Exception):
    """Base exception for all solver and pipeline errors."""

    pass


class GameValidationError(AdmsynthError):
    """Exception raised when a game description violates the game invariants."""

    pass


class AlternationViolation(GameValidationError):
    """A transition connects two states owned by the same player."""

    pass


class BlockingState(GameValidationError):
    """A state has no outgoing action."""

    pass


class InjectivityViolation(GameValidationError):
    """Two actions of one state lead to the same successor."""

    pass


class CostSignViolation(GameValidationError):
    """A Sys action costs nothing or an Env action has a nonzero cost."""

    pass


class DanglingReference(GameValidationError):
    """An edge or the initial state refers to an unknown state."""

    pass


class UnknownState(GameValidationError):
    """A state id was queried that the game does not contain."""

    pass


class InvalidPlay(GameValidationError):
    """A play uses an edge that is not in the game."""

    pass


class SolverError(AdmsynthError):
    """Exception raised when a solver precondition does not hold."""

    pass


class InconsistentTables(SolverError):
    """Adversarial and cooperative tables disagree (cval > aval somewhere)."""

    pass


class IncompleteStrategy(SolverError):
    """A strategy has no choice at a Sys node it can reach."""

    pass


class ScriptExhausted(SolverError):
    """A scripted Env policy ran out of actions before a leaf was reached."""

    pass


class BothOrNeither(SolverError):
    """The admissible and dominated characterisations did not split cleanly."""

    pass


class CapExceededError(AdmsynthError):
    """Exception raised when a configured size cap would be exceeded."""

    pass


class BudgetOverflowGuard(CapExceededError):
    """Unrolling would produce more tree nodes than the node cap allows."""

    pass


class EnumerationTooLarge(CapExceededError):
    """Strategy enumeration would exceed the enumeration cap."""

    pass


class DomainSpecError(AdmsynthError):
    """Exception raised for invalid gridworld or automaton descriptions."""

    pass


class InvalidSpec(DomainSpecError):
    """A gridworld description is inconsistent."""

    pass


class LabelOutsideAlphabet(DomainSpecError):
    """A labeling uses a symbol the automaton does not declare, or misses a state."""

    pass


class ArtifactError(AdmsynthError):
    """Exception raised for errors reading or writing artifacts on disk."""

    pass
