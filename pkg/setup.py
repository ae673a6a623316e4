from setuptools import setup, find_packages

setup(
    name="dualdata-toolchain",
    version="1.0.0",
    packages=find_packages(exclude=["tests", "tests.*"]),
    package_data={"app.lang": ["prelude.dd"]},
    py_modules=["toolchain_mcp_server"],
    install_requires=[
        "fastapi>=0.103.1",
        "uvicorn>=0.23.2",
        "pydantic>=2.4.2",
        "python-dotenv>=1.0.0",
        "httpx>=0.25.0",
        "mcp>=1.2.0,<2",
    ],
    extras_require={
        "test": ["pytest>=7.4.0", "hypothesis>=6.82.0"],
    },
    entry_points={
        "console_scripts": [
            "dualdata=app.cli:main",
            "dualdata-server=app.main:run_server",
        ],
    },
    description="Typechecker, evaluator and de/refunctionalizer for a dependent language with data and codata",
    keywords="dependent types, codata, defunctionalization, refunctionalization, mcp",
    python_requires=">=3.10",
)
