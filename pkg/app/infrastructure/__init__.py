# Infrastructure package
