"""
多体 Schmidt 分解工具包异常定义
所有公开操作只抛出本模块中的异常
"""


class MultiSchmidtError(Exception):
    """工具包基础异常"""


# ==================== 输入契约错误 ====================

class DimensionMismatch(MultiSchmidtError, ValueError):
    """维度不匹配"""


class EmptyDims(MultiSchmidtError, ValueError):
    """维度列表为空"""


class IndexOutOfRange(MultiSchmidtError, ValueError):
    """子系统编号越界"""


class NotOrthonormal(MultiSchmidtError, ValueError):
    """向量组不是正交归一的"""


class InvalidBipartition(MultiSchmidtError, ValueError):
    """无效的二分划"""


class ZeroState(MultiSchmidtError, ValueError):
    """零态不能参与判定操作"""


class TooManyTerms(MultiSchmidtError, ValueError):
    """Schmidt 项数超过最小子系统维度"""


class StateFileError(MultiSchmidtError, ValueError):
    """状态文件或基文件格式错误"""


# ==================== 数值与算法错误 ====================

class SvdFailure(MultiSchmidtError):
    """奇异值分解不收敛"""


class NumericalAmbiguity(MultiSchmidtError):
    """简并簇在重试预算内无法稳定分离"""


class PreconditionViolated(MultiSchmidtError):
    """操作前置条件不满足"""


class NotProportional(MultiSchmidtError):
    """残差因子不满足所要求的线性相关性"""


class ReductionCheckFailed(MultiSchmidtError):
    """基约化后置条件校验失败"""
