class SWIPTException(Exception):
    pass

class SWIPTConfigException(SWIPTException):
    pass

class SWIPTValueException(SWIPTException, ValueError):
    pass

class SWIPTNumericsException(SWIPTException):
    pass

class SWIPTInfeasibleException(SWIPTException):
    pass

class SWIPTOptimizationException(SWIPTException):
    pass

class SWIPTSimulationException(SWIPTException):
    pass

class SWIPTValidationException(SWIPTException):
    pass
