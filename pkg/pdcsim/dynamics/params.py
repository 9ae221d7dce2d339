from pydantic import BaseModel, ConfigDict, Field, model_validator

from pdcsim.gaussian.modes import StatKind


class SteadyParams(BaseModel):
    """Lossless scenario: interaction parameter r and input noise occupation n0."""
    model_config = ConfigDict(frozen=True)

    r: float = Field(ge=0.0)
    n0: float = Field(ge=0.0)
    stat: StatKind = StatKind.QUANTUM


class LossyParams(BaseModel):
    """Cavity scenario with decaying coupling kappa(t) = kappa0 * exp(-Lambda t) and loss rate lambda."""
    model_config = ConfigDict(frozen=True, populate_by_name=True)

    kappa0: float = Field(ge=0.0)
    decay_rate: float = Field(ge=0.0, alias="Lambda")
    loss_rate: float = Field(ge=0.0, alias="lambda")
    n0: float = Field(ge=0.0)
    t_max: float = Field(gt=0.0)
    dt: float = Field(gt=0.0)
    stat: StatKind = StatKind.QUANTUM

    @model_validator(mode="after")
    def check_step(self) -> "LossyParams":
        if self.dt > self.t_max:
            raise ValueError(f"dt ({self.dt}) must not exceed t_max ({self.t_max})")
        return self

    @property
    def n_steps(self) -> int:
        """Number of integration steps; the effective step is t_max / n_steps."""
        return max(1, int(round(self.t_max / self.dt)))
