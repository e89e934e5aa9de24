"""Exception hierarchy.

Every error carries a short machine-readable ``kind`` and the process exit
status the command line maps it to (2 inadmissible input, 3 no convergence,
4 configuration or I/O problem).
"""

from __future__ import annotations


class ShockInteractError(Exception):
    kind = "error"
    exit_code = 1

    def __init__(self, message: str = "", **context: object) -> None:
        super().__init__(message)
        self.context = dict(context)


class InadmissibleError(ShockInteractError):
    kind = "inadmissible"
    exit_code = 2


class NonPositiveDensity(InadmissibleError):
    kind = "non_positive_density"


class NonPositiveRadius(InadmissibleError):
    kind = "non_positive_radius"


class PotentialOutOfRange(InadmissibleError):
    kind = "potential_out_of_range"


class DegenerateJump(InadmissibleError):
    kind = "degenerate_jump"


class SonicShock(InadmissibleError):
    kind = "sonic_shock"


class InadmissibleBranch(InadmissibleError):
    kind = "inadmissible_branch"


class InadmissibleConfiguration(InadmissibleError):
    kind = "inadmissible_configuration"


class OutOfDomain(InadmissibleError):
    kind = "out_of_domain"


class CharacteristicDegeneracy(InadmissibleError):
    kind = "characteristic_degeneracy"


class SingularSystem(InadmissibleError):
    kind = "singular_system"


class NoConvergence(ShockInteractError):
    kind = "no_convergence"
    exit_code = 3


class NonFinite(NoConvergence):
    kind = "non_finite"


class BadResolution(ShockInteractError):
    kind = "bad_resolution"
    exit_code = 4


class QuadratureDomainError(ShockInteractError):
    kind = "quadrature_domain"
    exit_code = 4


class ConfigError(ShockInteractError):
    kind = "config_error"
    exit_code = 4
