from setuptools import setup, find_packages

setup(
    name="odelip",
    version="0.1.0",
    description="Lipschitz-regularized neural recovery of ODE right-hand sides from trajectory data",
    packages=find_packages(exclude=["examples", "examples.*"]),
    install_requires=[
        "numpy>=1.24.0",
        "scipy>=1.10.0",
        "pandas>=2.0.0",
        "python-dotenv>=1.0.0",
    ],
    extras_require={
        "test": [
            "pytest>=7.0.0",
            "hypothesis>=6.80.0",
        ],
    },
    entry_points={
        "console_scripts": [
            "odelip=odelip.cli:main",
        ],
    },
    python_requires=">=3.9",
)
