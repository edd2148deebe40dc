# Service unit tests package 