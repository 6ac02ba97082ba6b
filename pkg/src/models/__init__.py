# 交集數與資料模型模組