# 約束組裝模組