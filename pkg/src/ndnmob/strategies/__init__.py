from .base import Strategy
from .interest_forwarding import InterestForwarding
from .location_prediction import LocationPrediction, select_nap
from .no_management import NoManagement
from .zone_flooding import ZoneFlooding

REGISTRY = {cls.id: cls for cls in
            (LocationPrediction, NoManagement, InterestForwarding, ZoneFlooding)}
STRATEGY_IDS = frozenset(REGISTRY)

__all__ = ["Strategy", "LocationPrediction", "NoManagement",
           "InterestForwarding", "ZoneFlooding", "REGISTRY", "STRATEGY_IDS",
           "select_nap"]
