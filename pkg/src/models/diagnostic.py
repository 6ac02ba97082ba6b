"""
具名診斷訊息
"""

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass(frozen=True)
class Diagnostic:
    """一筆具名診斷（不是錯誤，但需要被報告）"""

    code: str
    message: str
    detail: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {'code': self.code, 'message': self.message, 'detail': dict(self.detail)}
