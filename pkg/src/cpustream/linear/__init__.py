from .Scaler import RunningScaler, scaler_transform
from .LinearModel import LinearModel, SGDRegressor, PassiveAggressiveRegressor
