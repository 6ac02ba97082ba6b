# Moore57 - 直徑 2、度數 57 Moore 圖的可行性工作台
# 核心模組包