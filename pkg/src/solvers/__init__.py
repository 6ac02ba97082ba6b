# 格點列舉求解模組