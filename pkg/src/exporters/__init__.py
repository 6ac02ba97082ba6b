# 結果匯出模組