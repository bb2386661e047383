"""Worker computing one pressure-curve point per gamma."""

from tmlab.potentials.models import Potential
from tmlab.thermo.pressure import PressurePoint, pressure_point
from tmlab.thermo.return_system import ReturnSystem
from tmlab.workers.base import WorkerBase


class PressureWorker(WorkerBase[float, PressurePoint]):
    """Evaluates root, z_c and pressure at each gamma of a batch."""

    def __init__(self, rs: ReturnSystem, potential: Potential, batch_size: int | None = None) -> None:
        super().__init__(batch_size=batch_size)
        self.rs = rs
        self.potential = potential
        # compile the chain once, before threads share it
        rs.chain_for(potential)

    @property
    def worker_name(self) -> str:
        return "PressureWorker"

    def get_item_id(self, item: float) -> str:
        return gamma_key(item)

    def process_item(self, item: float) -> PressurePoint:
        return pressure_point(self.rs, self.potential, item)


def gamma_key(gamma: float) -> str:
    return f"gamma={gamma!r}"
