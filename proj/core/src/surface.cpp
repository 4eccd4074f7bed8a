namespace sd {}
