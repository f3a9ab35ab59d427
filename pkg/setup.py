#!/usr/bin/env python3
"""
Setup script for icckit
"""

from pathlib import Path

from setuptools import setup

readme = Path("README.md")
long_description = readme.read_text(encoding="utf-8") if readme.exists() else ""

with open("requirements.txt", "r", encoding="utf-8") as fh:
    requirements = [line.strip() for line in fh
                    if line.strip() and not line.startswith("#") and not line.startswith(("pytest", "black", "flake8"))]

setup(
    name="icckit",
    version="0.1.0",
    description="Rate regions, Fourier-Motzkin projection and coding simulation for interference channels with common information",
    long_description=long_description,
    long_description_content_type="text/markdown",
    py_modules=[
        "channel",
        "coding_sim",
        "config",
        "errors",
        "file_formats",
        "main",
        "polytope",
        "prob_core",
        "regions",
    ],
    classifiers=[
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Information Analysis",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    python_requires=">=3.8",
    install_requires=requirements,
    extras_require={
        "dev": ["pytest>=6.2.0", "pytest-cov>=3.0.0", "black>=21.0.0", "flake8>=4.0.0"],
    },
    entry_points={
        "console_scripts": [
            "icckit=main:main",
        ],
    },
    include_package_data=True,
    zip_safe=False,
)
