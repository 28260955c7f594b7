from setuptools import setup, find_packages

setup(
    name="stochastic-shear-lab",
    version="0.1.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    python_requires=">=3.10",
    install_requires=[
        "fastapi>=0.115.0",
        "langgraph>=0.3.0",
        "numpy>=1.26",
        "pandas>=2.1",
        "pydantic>=2.7",
        "pydantic_settings>=2.3",
        "python-dotenv>=1.0.0",
        "python_json_logger>=3.1.0",
        "scipy>=1.13",
        "starlette>=0.40",
        "uvicorn>=0.30",
    ],
    extras_require={
        "test": [
            "pytest>=8.0.0",
            "pytest-cov>=4.1.0",
            "pytest-mock>=3.12.0",
            "pytest-timeout>=2.2.0",
            "hypothesis>=6.100",
            "httpx>=0.27",
        ],
    },
    entry_points={
        "console_scripts": [
            "shearlab=app.cli:main",
        ],
    },
)
