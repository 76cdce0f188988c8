# Signal complexity toolkit
# Main modules package
