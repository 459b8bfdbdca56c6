# Package marker for static prompt text
