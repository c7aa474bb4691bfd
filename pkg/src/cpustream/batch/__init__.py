from .Ols import OrdinaryLeastSquares, ols_fit
from .Cart import CartTree, CartParams, default_cart_params, cart_fit, cart_predict
from .RandomForest import RandomForest, ForestParams, default_forest_params, rf_fit, rf_predict
