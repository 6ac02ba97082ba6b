# 網格模型驗證模組