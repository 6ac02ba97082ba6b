"""
錯誤類型
所有模組共用的例外階層
"""


class WorkbenchError(Exception):
    """工作台基礎錯誤"""


class ArrayParseError(WorkbenchError, ValueError):
    """交集陣列字串格式錯誤"""


class NonIntegralMultiplicity(WorkbenchError):
    """k_i·b_i 無法被 c_{i+1} 整除"""

    def __init__(self, index: int, numerator: int, denominator: int):
        self.index = index
        self.numerator = numerator
        self.denominator = denominator
        super().__init__(
            f"k_{index} = {numerator}/{denominator} 不是整數，交集陣列不可行"
        )


class InfeasibleArray(WorkbenchError):
    """交集數出現負值或非整數"""


class OutOfRange(WorkbenchError, ValueError):
    """索引超出範圍"""


class InadmissibleBlock(WorkbenchError, ValueError):
    """區塊不滿足三角不等式或為 111"""


class NegativeRhs(WorkbenchError):
    """右手邊修正後出現負值"""


class NotInNullSpace(WorkbenchError, ValueError):
    """向量不在 M 的零空間內"""


class ConstraintConflict(WorkbenchError, ValueError):
    """同一變數被固定為兩個不同的值"""


class Infeasible(WorkbenchError):
    """沒有滿足條件的整數解"""


class UnboundedLattice(WorkbenchError):
    """區間傳播無法界定某個零空間係數"""


class Unrealizable(WorkbenchError, ValueError):
    """共線模式無法在網格上實現"""


class GridError(WorkbenchError, ValueError):
    """網格參數錯誤"""


class InvalidPermSystem(WorkbenchError, ValueError):
    """置換系統的度數、索引對或置換不合法"""


class DataFileError(WorkbenchError):
    """已存結果檔案缺漏或格式錯誤"""
